#include "xbarvmm/device.hpp"

#include <cmath>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

double ResistanceDistribution::state_overlap() const {
    // P(lognormal(lrs) > lognormal(hrs)) for independent draws
    const double spread = std::sqrt(sigma_lrs * sigma_lrs + sigma_hrs * sigma_hrs);
    const double gap = std::log(median_hrs_mohm) - std::log(median_lrs_mohm);
    if (spread == 0.0) return gap > 0.0 ? 0.0 : 1.0;
    // Φ(-gap/spread)
    return 0.5 * std::erfc(gap / spread / std::sqrt(2.0));
}

void ResistanceDistribution::validate() const {
    if (!(median_lrs_mohm > 0.0)) throw ParamError("median_lrs_mohm must be > 0");
    if (!(median_hrs_mohm > median_lrs_mohm))
        throw ParamError("median_hrs_mohm must exceed median_lrs_mohm");
    if (sigma_lrs < 0.0 || sigma_hrs < 0.0) throw ParamError("sigma must be >= 0");
    if (state_overlap() > separation_threshold)
        throw ParamError("LRS/HRS distributions overlap beyond the separation threshold");
}

double sample_resistance_mohm(DeviceState state, const ResistanceDistribution& dist,
                              Rng& rng) {
    // cheap field checks only; the overlap test runs once per crossbar build
    if (!(dist.median_lrs_mohm > 0.0) || !(dist.median_hrs_mohm > dist.median_lrs_mohm) ||
        dist.sigma_lrs < 0.0 || dist.sigma_hrs < 0.0)
        throw ParamError("invalid resistance distribution parameters");
    const double z = rng.normal01();  // drawn even at sigma=0: fixed stream consumption
    return dist.median_mohm(state) * std::exp(dist.sigma(state) * z);
}

DeviceCell transition(DeviceCell cell, DeviceState target,
                      const ResistanceDistribution& dist, Rng& rng) {
    cell.state = target;
    cell.resistance_mohm = sample_resistance_mohm(target, dist, rng);
    cell.program_count += 1;
    return cell;
}

}  // namespace xbarvmm
