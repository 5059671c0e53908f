use crate::error::{Error, Result};

/// Forward-velocity distribution as weighted velocity samples, kept sorted
/// by velocity with duplicates merged.
///
/// Gridded profiles and histograms are the intended inputs: [`fwhm`] reads
/// the weights as a sampled profile, so raw Monte Carlo draws should be
/// binned first (see [`VelocityDistribution::from_draws`]).
///
/// [`fwhm`]: VelocityDistribution::fwhm
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityDistribution {
    samples: Vec<(f64, f64)>,
}

impl VelocityDistribution {
    pub fn new(samples: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut samples: Vec<(f64, f64)> = samples.into_iter().collect();
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for &(v, w) in &samples {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("velocity must be positive, got {v}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::domain(format!("weight must be non-negative, got {w}")));
            }
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
        for (v, w) in samples {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        let total: f64 = merged.iter().map(|s| s.1).sum();
        if total <= 0.0 {
            return Err(Error::domain("weights sum to zero"));
        }
        Ok(Self { samples: merged })
    }

    /// All weight at one velocity.
    pub fn dirac(velocity: f64) -> Result<Self> {
        Self::new([(velocity, 1.0)])
    }

    /// Gaussian profile sampled on `points` equally spaced velocities over
    /// `mean ± 4σ`, σ = fwhm / (2√(2 ln 2)). Grid points at or below zero
    /// are dropped.
    pub fn gaussian(mean: f64, fwhm: f64, points: usize) -> Result<Self> {
        crate::error::ensure_positive("mean velocity", mean)?;
        crate::error::ensure_positive("fwhm", fwhm)?;
        if points < 3 {
            return Err(Error::domain(format!("need at least 3 grid points, got {points}")));
        }
        let sigma = fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
        let lo = mean - 4.0 * sigma;
        let step = 8.0 * sigma / (points - 1) as f64;
        Self::new(
            (0..points)
                .map(|i| lo + i as f64 * step)
                .filter(|&v| v > 0.0)
                .map(|v| (v, (-0.5 * ((v - mean) / sigma).powi(2)).exp())),
        )
    }

    /// Histogram of unit-weight draws with bins of `bin_width` aligned to
    /// multiples of the width. Samples are bin centres.
    pub fn from_draws(draws: &[f64], bin_width: f64) -> Result<Self> {
        crate::error::ensure_positive("bin width", bin_width)?;
        if draws.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let mut bins = std::collections::BTreeMap::<i64, f64>::new();
        for &v in draws {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("velocity must be positive, got {v}")));
            }
            *bins.entry((v / bin_width).floor() as i64).or_insert(0.0) += 1.0;
        }
        let (first, last) = (*bins.keys().next().unwrap(), *bins.keys().last().unwrap());
        // empty bins inside the range are kept so the profile stays uniform
        Self::new((first..=last).map(|k| {
            let centre = (k as f64 + 0.5) * bin_width;
            (centre, bins.get(&k).copied().unwrap_or(0.0))
        }))
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.samples.iter().map(|s| s.1).sum()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().map(|(v, w)| v * w).sum::<f64>() / self.total_weight()
    }

    pub fn min_velocity(&self) -> f64 {
        self.samples[0].0
    }

    pub fn max_velocity(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    /// Full width at half maximum of the weight profile, with linear
    /// interpolation of the half-maximum crossings. A profile that never
    /// drops below half maximum on one side extends to its last sample.
    pub fn fwhm(&self) -> Result<f64> {
        if self.samples.len() < 2 {
            return Err(Error::domain("FWHM needs at least two distinct velocities"));
        }
        let s = &self.samples;
        let (peak, &(_, w_max)) = s
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .unwrap();
        let half = 0.5 * w_max;
        let crossing = |inner: usize, outer: usize| {
            let (v_in, w_in) = s[inner];
            let (v_out, w_out) = s[outer];
            v_in + (w_in - half) / (w_in - w_out) * (v_out - v_in)
        };

        let mut i = peak;
        while i > 0 && s[i - 1].1 >= half {
            i -= 1;
        }
        let low = if i == 0 { s[0].0 } else { crossing(i, i - 1) };

        let mut j = peak;
        while j + 1 < s.len() && s[j + 1].1 >= half {
            j += 1;
        }
        let high = if j + 1 == s.len() { s[j].0 } else { crossing(j, j + 1) };
        Ok(high - low)
    }

    /// Every velocity moved by `dv`. Fails if any would become non-positive.
    pub fn shifted(&self, dv: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|&(v, w)| (v + dv, w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_summary() {
        let d = VelocityDistribution::gaussian(85.0, 30.0, 401).unwrap();
        assert!((d.mean() - 85.0).abs() < 1e-9);
        assert!((d.fwhm().unwrap() - 30.0).abs() < 0.01);
    }

    #[test]
    fn dirac_has_no_width() {
        let d = VelocityDistribution::dirac(85.0).unwrap();
        assert_eq!(d.mean(), 85.0);
        assert!(d.fwhm().is_err());
    }

    #[test]
    fn two_point_profile_width() {
        let d = VelocityDistribution::new([(80.0, 1.0), (90.0, 1.0)]).unwrap();
        assert_eq!(d.fwhm().unwrap(), 10.0);
    }

    #[test]
    fn triangle_fwhm() {
        // peak 1 at 10, zero at 0 and 20: half max at 5 and 15
        let d = VelocityDistribution::new((0..=20).map(|i| {
            let v = 1.0 + i as f64;
            (v, 1.0 - ((v - 11.0) / 10.0).abs())
        }))
        .unwrap();
        assert!((d.fwhm().unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_merge() {
        let d = VelocityDistribution::new([(90.0, 1.0), (80.0, 2.0), (90.0, 3.0)]).unwrap();
        assert_eq!(d.samples(), &[(80.0, 2.0), (90.0, 4.0)]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            VelocityDistribution::new(Vec::new()),
            Err(Error::EmptyDistribution)
        ));
        assert!(VelocityDistribution::new([(0.0, 1.0)]).is_err());
        assert!(VelocityDistribution::new([(10.0, -1.0)]).is_err());
        assert!(VelocityDistribution::new([(10.0, 0.0)]).is_err());
        assert!(VelocityDistribution::dirac(3.0).unwrap().shifted(-5.0).is_err());
    }

    #[test]
    fn binning_draws() {
        let draws = [1.2, 1.7, 2.1, 5.9];
        let d = VelocityDistribution::from_draws(&draws, 1.0).unwrap();
        assert_eq!(
            d.samples(),
            &[(1.5, 2.0), (2.5, 1.0), (3.5, 0.0), (4.5, 0.0), (5.5, 1.0)]
        );
        assert_eq!(d.total_weight(), 4.0);
    }
}
