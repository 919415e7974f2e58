#include "lrising/model.hpp"

#include <cmath>

#include "lrising/errors.hpp"
#include "lrising/exact.hpp"

namespace lrising {

double ExternalField::at(std::size_t index) const {
  if (auto* h = std::get_if<double>(&value)) return *h;
  if (auto* table = std::get_if<std::vector<double>>(&value)) return (*table)[index];
  return 0.0;
}

bool ExternalField::is_zero() const {
  if (auto* h = std::get_if<double>(&value)) return *h == 0.0;
  if (auto* table = std::get_if<std::vector<double>>(&value)) {
    for (double v : *table)
      if (v != 0.0) return false;
  }
  return true;
}

GibbsModel::GibbsModel(Volume volume, ModelParams params, BoundaryCondition bc, TailPolicy tails)
    : volume_(volume), params_(std::move(params)), bc_(std::move(bc)) {
  require(std::isfinite(params_.beta) && params_.beta >= 0.0, "beta must be finite and non-negative");
  params_.coupling.validate(volume_.dimension());
  require(bc_.dimension() == 0 || bc_.dimension() == volume_.dimension(),
          "boundary condition dimension does not match the volume");
  const std::size_t n = volume_.size();
  if (auto* table = std::get_if<std::vector<double>>(&params_.field.value))
    require(table->size() == n, "external field table must cover every site of the volume");

  const auto w = static_cast<std::size_t>(volume_.width());
  if (volume_.dimension() == 1) {
    table_.assign(w, 0.0);
    for (std::size_t k = 1; k < w; ++k) table_[k] = coupling_at(params_.coupling, static_cast<long>(k), 0);
  } else {
    table_.assign(w * w, 0.0);
    for (std::size_t d2 = 0; d2 < w; ++d2)
      for (std::size_t d1 = 0; d1 < w; ++d1)
        if (d1 + d2 > 0)
          table_[d2 * w + d1] = coupling_at(params_.coupling, static_cast<long>(d1), static_cast<long>(d2));
  }

  boundary_fields_.resize(n);
  fields_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    boundary_fields_[i] = lrising::boundary_field(volume_, params_.coupling, bc_, volume_.site(i), tails);
    fields_[i] = boundary_fields_[i] + params_.field.at(i);
  }
}

GibbsModel GibbsModel::with_beta(double beta) const {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and non-negative");
  GibbsModel copy = *this;
  copy.params_.beta = beta;
  return copy;
}

double GibbsModel::energy(std::span<const Spin> spins) const {
  require(spins.size() == size(), "energy: configuration length does not match the volume");
  const std::size_t n = size();
  double pair = 0.0;
  double single = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += coupling(i, j) * spins[j];
    pair += spins[i] * row;
    single += spins[i] * fields_[i];
  }
  return -pair - single;
}

double GibbsModel::local_field(std::span<const Spin> spins, std::size_t i) const {
  double h = fields_[i];
  for (std::size_t j = 0; j < size(); ++j)
    if (j != i) h += coupling(i, j) * spins[j];
  return h;
}

double hamiltonian(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                   const Configuration& sigma) {
  validate_configuration(volume, sigma);
  return GibbsModel(volume, params, bc).energy(sigma.spins());
}

double energy_delta(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                    const Configuration& sigma, Site site) {
  validate_configuration(volume, sigma);
  const GibbsModel model(volume, params, bc);
  return model.energy_delta(sigma.spins(), volume.index_of(site));
}

double specification_kernel(const Volume& volume, const ModelParams& params, const BoundaryCondition& bc,
                            const Configuration& sigma) {
  validate_configuration(volume, sigma);
  const GibbsModel model(volume, params, bc);
  const double log_z = exact::log_partition(model);
  return std::exp(-model.beta() * model.energy(sigma.spins()) - log_z);
}

double excess_energy(const Volume& volume, const CouplingSpec& spec, const BoundaryCondition& bc) {
  require(volume.dimension() == 1, "excess_energy: one-dimensional volume required");
  double sum = 0.0;
  for (std::size_t i = 0; i < volume.size(); ++i) sum += boundary_field(volume, spec, bc, volume.site(i));
  return 2.0 * sum;
}

Decimated decimate(const Volume& volume, const Configuration& sigma) {
  require(volume.dimension() == 1, "decimate: one-dimensional configuration required");
  validate_configuration(volume, sigma);
  const long lo = volume.lo() >= 0 ? (volume.lo() + 1) / 2 : -((-volume.lo()) / 2);
  const long hi = volume.hi() >= 0 ? volume.hi() / 2 : -((-volume.hi() + 1) / 2);
  require(lo <= hi, "decimate: volume contains no even site");
  const Volume out = Volume::interval(lo, hi);
  std::vector<Spin> spins;
  spins.reserve(out.size());
  for (long i = lo; i <= hi; ++i) spins.push_back(sigma[volume.index_of(Site{2 * i, 0})]);
  return Decimated{out, Configuration(std::move(spins))};
}

}  // namespace lrising
