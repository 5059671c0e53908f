//! Bessel functions of the first kind, integer order.
//!
//! Three regimes:
//! * `|x| < 12`: ascending power series, summed until terms stop mattering.
//! * `12 <= |x| < 200`: Miller's backward recurrence normalised with
//!   `J0 + 2 Σ J2k = 1`.
//! * `|x| >= 200`: Hankel asymptotic expansion.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;
const ASYMPTOTIC_LIMIT: f64 = 200.0;

/// `J_n(x)` for integer order `n` and real `x`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let ax = x.abs();
    let value = if ax < SERIES_LIMIT {
        ascending_series(n, ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(n, ax)
    } else {
        hankel_asymptotic(n, ax)
    };
    // J_n(-x) = (-1)^n J_n(x)
    if x < 0.0 && n % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Second-order Bessel function, the one the fringe visibility needs.
#[inline]
pub fn j2(x: f64) -> f64 {
    bessel_j(2, x)
}

fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && (k as f64) > half {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let start = (x + 30.0 + 6.0 * x.sqrt()).max(n as f64 + 30.0) as u32;
    let start = start + start % 2;
    let two_over_x = 2.0 / x;
    let (mut above, mut current) = (0.0f64, 1.0e-30f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for j in (1..=start).rev() {
        // current = J_j, above = J_{j+1}; step down to J_{j-1}
        let below = j as f64 * two_over_x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
        let order = j - 1;
        if order > 0 && order % 2 == 0 {
            norm += current;
        }
        if order == n {
            wanted = current;
        }
    }
    // current now holds J_0
    wanted / (2.0 * norm + current)
}

fn hankel_asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        let mag = a.abs();
        if mag > prev || mag < 1e-18 {
            break;
        }
        prev = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    let chi = x - (0.5 * n as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bessel's integral `J_n(x) = (1/π) ∫_0^π cos(nτ − x sin τ) dτ`.
    /// The integrand is smooth and periodic, so the trapezoid rule converges
    /// geometrically.
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let steps = 4000;
        let h = PI / steps as f64;
        let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
        let mut sum = 0.5 * (f(0.0) + f(PI));
        for i in 1..steps {
            sum += f(i as f64 * h);
        }
        sum * h / PI
    }

    #[test]
    fn matches_integral_oracle_on_visibility_range() {
        for i in 0..=2000 {
            let x = i as f64 * 0.01;
            for n in 0..=3 {
                let got = bessel_j(n, x);
                let want = integral_oracle(n, x);
                assert!((got - want).abs() < 1e-10, "J{n}({x}) = {got}, oracle {want}");
            }
        }
    }

    #[test]
    fn reference_values() {
        // scipy.special.jv(2, x)
        let cases = [
            (0.5, 0.030604023458682638),
            (1.0, 0.1149034849319005),
            (2.689, 0.46851505082902895),
            (7.0, -0.3014172200859401),
            (11.99, -0.08283260643563582),
            (12.0, -0.08493049487860475),
            (15.0, 0.041571677975250444),
            (20.0, -0.16034135192299823),
            (50.0, -0.05971280079425882),
            (250.0, 0.025707221117921585),
            (1000.0, -0.02477722952860599),
        ];
        for (x, want) in cases {
            assert!((j2(x) - want).abs() < 1e-12, "J2({x}) = {} vs {want}", j2(x));
        }
        assert!((bessel_j(0, 1000.0) - 0.024786686152420172).abs() < 1e-13);
        assert!((bessel_j(1, 250.0) + 0.043269038410330744).abs() < 1e-13);
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        for edge in [SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            let below = bessel_j(2, edge - 1e-12);
            let above = bessel_j(2, edge);
            assert!((below - above).abs() < 1e-11, "jump at {edge}: {below} vs {above}");
        }
    }

    #[test]
    fn parity_and_special_points() {
        assert_eq!(j2(0.0), 0.0);
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(j2(-3.3), j2(3.3));
        assert_eq!(bessel_j(1, -3.3), -bessel_j(1, 3.3));
        assert_eq!(j2(f64::INFINITY), 0.0);
        assert!(j2(f64::NAN).is_nan());
        // first positive zero of J2
        assert!(j2(5.135622301840683).abs() < 1e-14);
    }

    #[test]
    fn global_maximum_of_j2() {
        // max J2 = 0.48649868... at x = 3.0542...; bounds the visibility
        let peak = j2(3.0542369289526854);
        assert!((peak - 0.4864986822690032).abs() < 1e-13);
        for i in 0..20000 {
            assert!(j2(i as f64 * 0.001).abs() <= peak + 1e-15);
        }
    }

    #[test]
    fn small_argument_is_quadratic() {
        for x in [1e-3, 1e-4, 1e-6] {
            let ratio = j2(x) / (x * x / 8.0);
            assert!((ratio - 1.0).abs() < 1e-6);
        }
    }
}
