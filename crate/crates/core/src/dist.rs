//! Distribution functions used by the estimation and power layers: standard
//! normal, Student-t, central and noncentral F, the regularized incomplete
//! beta function, and the upper-tail second moment of the standard normal.
//!
//! Quantiles are all computed by bracketed root finding on the matching cdf.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::roots::{brent, expand_upper};

const QUANTILE_XTOL: f64 = 1e-13;
const POISSON_TAIL_MASS: f64 = 1e-12;
const BETA_CF_MAX_ITER: usize = 20_000;

/// Parameters of a noncentral F distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoncentralFParams {
    df1: f64,
    df2: f64,
    ncp: f64,
}

impl NoncentralFParams {
    pub fn new(df1: f64, df2: f64, ncp: f64) -> Result<Self> {
        if !(df1 > 0.0 && df1.is_finite()) || !(df2 > 0.0 && df2.is_finite()) {
            return Err(domain(format!(
                "F degrees of freedom must be positive and finite, got ({df1}, {df2})"
            )));
        }
        if !(ncp >= 0.0 && ncp.is_finite()) {
            return Err(domain(format!("noncentrality must be >= 0, got {ncp}")));
        }
        Ok(Self { df1, df2, ncp })
    }

    pub fn df1(&self) -> f64 {
        self.df1
    }

    pub fn df2(&self) -> f64 {
        self.df2
    }

    pub fn ncp(&self) -> f64 {
        self.ncp
    }
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal cdf, Φ(x) = erfc(-x/√2)/2.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal upper tail, 1 − Φ(x), without cancellation for large x.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Lower quantile of the standard normal: the `x` with Φ(x) = p.
pub fn norm_quantile(p: f64) -> Result<f64> {
    check_open_probability(p, "norm_quantile")?;
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        // 1 - p is exact for p in [0.5, 1)
        return norm_quantile(1.0 - p).map(|x| -x);
    }
    brent(|x| norm_cdf(x) - p, -40.0, 0.0, QUANTILE_XTOL * 1e-2)
}

/// ln B(a, b).
///
/// For large arguments the lgamma values are huge and nearly cancel, so the
/// Stirling expansion is differenced analytically instead.
fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    let sum = small + large;
    if small >= STIRLING_MIN {
        // 0.5 ln 2π − 0.5 ln(a+b) + (a − ½) ln(a/(a+b)) + (b − ½) ln(b/(a+b)) + Δ
        let r = small / large;
        let ln_large_frac = -r.ln_1p();
        let ln_small_frac = r.ln() + ln_large_frac;
        0.5 * (2.0 * PI).ln() - 0.5 * sum.ln()
            + (small - 0.5) * ln_small_frac
            + (large - 0.5) * ln_large_frac
            + stirling_correction(small)
            + stirling_correction(large)
            - stirling_correction(sum)
    } else if large >= STIRLING_MIN {
        // ln Γ(large) − ln Γ(sum) = −(large − ½) ln(1 + s/large) − s ln(sum) + s + Δ
        libm::lgamma(small) - (large - 0.5) * (small / large).ln_1p() - small * sum.ln()
            + small
            + stirling_correction(large)
            - stirling_correction(sum)
    } else {
        libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(sum)
    }
}

const STIRLING_MIN: f64 = 10.0;

/// ln Γ(z) − [(z − ½) ln z − z + ½ ln 2π], valid for z ≥ 10.
fn stirling_correction(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// Regularized incomplete beta function I_x(a, b).
pub fn inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("inc_beta requires a, b > 0, got ({a}, {b})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("inc_beta requires x in [0, 1], got {x}")));
    }
    Ok(inc_beta_unchecked(a, b, x))
}

fn inc_beta_unchecked(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    // The continued fraction converges fastest for x < (a + 1) / (a + b + 2);
    // use I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
    if x > (a + 1.0) / (a + b + 2.0) {
        1.0 - inc_beta_cf_term(b, a, 1.0 - x)
    } else {
        inc_beta_cf_term(a, b, x)
    }
}

/// Same as [`inc_beta`] but takes both `x` and `1 - x`, so callers that know
/// the complement exactly do not lose it to rounding.
fn inc_beta_split(a: f64, b: f64, x: f64, one_minus_x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if one_minus_x <= 0.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        1.0 - inc_beta_cf_term(b, a, one_minus_x)
    } else {
        inc_beta_cf_term(a, b, x)
    }
}

/// x^a (1-x)^b / (a B(a,b)) times the continued fraction for I_x(a, b).
fn inc_beta_cf_term(a: f64, b: f64, x: f64) -> f64 {
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b) - a.ln();
    ln_front.exp() * beta_continued_fraction(a, b, x)
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn check_df(df: f64, what: &str) -> Result<()> {
    if df > 0.0 && !df.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("{what}: degrees of freedom must be > 0, got {df}")))
    }
}

fn check_open_probability(p: f64, what: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what}: probability must lie in (0, 1), got {p}")))
    }
}

/// Student-t cdf with `df` degrees of freedom.
pub fn t_cdf(x: f64, df: f64) -> Result<f64> {
    check_df(df, "t_cdf")?;
    if x.is_nan() {
        return Err(domain("t_cdf: x is NaN"));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let tail = 0.5 * t_two_sided_tail(x, df);
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// P(|T| ≥ |t|): the two-sided p-value of a t statistic.
pub fn t_two_sided_p(t: f64, df: f64) -> Result<f64> {
    check_df(df, "t_two_sided_p")?;
    if t.is_nan() {
        return Err(domain("t_two_sided_p: statistic is NaN"));
    }
    Ok(t_two_sided_tail(t, df))
}

fn t_two_sided_tail(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let t2 = t * t;
    // I_{df/(df+t²)}(df/2, 1/2)
    let denom = df + t2;
    inc_beta_split(0.5 * df, 0.5, df / denom, t2 / denom).clamp(0.0, 1.0)
}

/// Student-t lower quantile.
pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    check_open_probability(p, "t_quantile")?;
    check_df(df, "t_quantile")?;
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        return t_quantile(1.0 - p, df).map(|x| -x);
    }
    // Solve on the lower tail: P(T <= -x) = p with x > 0.
    let g = |x: f64| 0.5 * t_two_sided_tail(x, df) - p;
    let hi = expand_upper(g, 0.0, 1.0, 1e300)?;
    let x = brent(g, 0.0, hi, QUANTILE_XTOL * hi.max(1.0))?;
    Ok(-x)
}

/// Central F cdf.
pub fn f_cdf_central(x: f64, df1: f64, df2: f64) -> Result<f64> {
    check_df(df1, "f_cdf_central")?;
    check_df(df2, "f_cdf_central")?;
    if x.is_nan() {
        return Err(domain("f_cdf_central: x is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (y, one_minus_y) = f_beta_argument(x, df1, df2);
    Ok(inc_beta_split(0.5 * df1, 0.5 * df2, y, one_minus_y))
}

/// Central F upper tail, 1 − F(x).
pub fn f_sf_central(x: f64, df1: f64, df2: f64) -> Result<f64> {
    check_df(df1, "f_sf_central")?;
    check_df(df2, "f_sf_central")?;
    if x.is_nan() {
        return Err(domain("f_sf_central: x is NaN"));
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    let (y, one_minus_y) = f_beta_argument(x, df1, df2);
    Ok(inc_beta_split(0.5 * df2, 0.5 * df1, one_minus_y, y))
}

/// (df1·x / (df1·x + df2), df2 / (df1·x + df2))
fn f_beta_argument(x: f64, df1: f64, df2: f64) -> (f64, f64) {
    let num = df1 * x;
    let denom = num + df2;
    (num / denom, df2 / denom)
}

/// Upper-`alpha_upper` quantile of the central F distribution: the `x` with
/// P(F > x) = alpha_upper.
pub fn f_quantile_central(alpha_upper: f64, df1: f64, df2: f64) -> Result<f64> {
    check_open_probability(alpha_upper, "f_quantile_central")?;
    check_df(df1, "f_quantile_central")?;
    check_df(df2, "f_quantile_central")?;
    let g = |x: f64| f_sf_central_unchecked(x, df1, df2) - alpha_upper;
    let hi = expand_upper(g, 0.0, 1.0, 1e300)?;
    brent(g, 0.0, hi, QUANTILE_XTOL * hi.max(1.0) * 1e-2)
}

fn f_sf_central_unchecked(x: f64, df1: f64, df2: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let (y, one_minus_y) = f_beta_argument(x, df1, df2);
    inc_beta_split(0.5 * df2, 0.5 * df1, one_minus_y, y)
}

/// Noncentral F cdf.
///
/// Uses the Poisson mixture
/// `P(F ≤ x) = Σ_j Pois(j; λ/2) · I_y(df1/2 + j, df2/2)`, `y = df1·x/(df1·x + df2)`,
/// summed outward from the Poisson mode until the omitted Poisson mass is
/// below 1e-12.
pub fn f_cdf_noncentral(x: f64, params: &NoncentralFParams) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("f_cdf_noncentral requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if params.ncp == 0.0 {
        return f_cdf_central(x, params.df1, params.df2);
    }
    let (y, one_minus_y) = f_beta_argument(x, params.df1, params.df2);
    let (a, b) = (0.5 * params.df1, 0.5 * params.df2);
    Ok(poisson_mixture(0.5 * params.ncp, |j| {
        inc_beta_split(a + j as f64, b, y, one_minus_y)
    })
    .clamp(0.0, 1.0))
}

/// Noncentral F upper tail, computed directly as a mixture of upper tails so
/// that small tail probabilities keep their relative accuracy.
pub fn f_sf_noncentral(x: f64, params: &NoncentralFParams) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("f_sf_noncentral requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if params.ncp == 0.0 {
        return f_sf_central(x, params.df1, params.df2);
    }
    let (y, one_minus_y) = f_beta_argument(x, params.df1, params.df2);
    let (a, b) = (0.5 * params.df1, 0.5 * params.df2);
    Ok(poisson_mixture(0.5 * params.ncp, |j| {
        inc_beta_split(b, a + j as f64, one_minus_y, y)
    })
    .clamp(0.0, 1.0))
}

/// Σ_j Pois(j; mean) · term(j), summed outward from the mode.
fn poisson_mixture<F: Fn(u64) -> f64>(mean: f64, term: F) -> f64 {
    let ln_weight = |j: u64| -mean + j as f64 * mean.ln() - libm::lgamma(j as f64 + 1.0);
    let mode = mean.floor() as u64;
    let mut mass = ln_weight(mode).exp();
    let mut total = mass * term(mode);
    let mut down = mode; // last index included below the mode
    let mut up = mode; // last index included above the mode
    let mut w_down = mass;
    let mut w_up = mass;
    while 1.0 - mass > POISSON_TAIL_MASS {
        let next_down = if down > 0 {
            w_down * down as f64 / mean
        } else {
            0.0
        };
        let next_up = w_up * mean / (up + 1) as f64;
        if down > 0 && next_down >= next_up {
            down -= 1;
            w_down = next_down;
            mass += w_down;
            total += w_down * term(down);
        } else {
            up += 1;
            w_up = next_up;
            mass += w_up;
            total += w_up * term(up);
        }
        if w_up == 0.0 && (down == 0 || w_down == 0.0) {
            break;
        }
    }
    total
}

/// ∫_c^∞ x² φ(x) dx for the standard normal density φ.
///
/// Integrating by parts with d(−φ) = xφ dx gives
/// ∫_c^∞ x·xφ(x) dx = [−xφ(x)]_c^∞ + ∫_c^∞ φ(x) dx = c·φ(c) + (1 − Φ(c)).
pub fn truncated_tail_second_moment(c: f64) -> f64 {
    if c == f64::NEG_INFINITY {
        return 1.0;
    }
    if c == f64::INFINITY {
        return 0.0;
    }
    c * norm_pdf(c) + norm_sf(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_density_values() {
        assert_abs_diff_eq!(norm_pdf(0.0), 0.398_942_280_401_432_7, epsilon = 1e-15);
        assert_abs_diff_eq!(norm_pdf(1.6449), 0.103_127_773_699_945_83, epsilon = 1e-14);
        assert_eq!(norm_pdf(2.3), norm_pdf(-2.3));
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(norm_cdf(0.0), 0.5);
        assert_abs_diff_eq!(norm_cdf(40.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(norm_cdf(1.96), 0.975_002_104_851_779_5, epsilon = 1e-15);
        assert_abs_diff_eq!(norm_cdf(-5.0), 2.866_515_718_791_939e-7, epsilon = 1e-20);
        let deep = norm_cdf(-20.0);
        assert!((deep / 2.753_624_118_606_233_7e-89 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_quantile_values() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(norm_quantile(0.95).unwrap(), 1.644_853_626_951_472_6, epsilon = 1e-12);
        assert_abs_diff_eq!(norm_quantile(0.975).unwrap(), 1.959_963_984_540_054_3, epsilon = 1e-12);
        assert_abs_diff_eq!(norm_quantile(1e-10).unwrap(), -6.361_340_902_404_056, epsilon = 1e-10);
        assert_abs_diff_eq!(norm_quantile(1e-300).unwrap(), -37.047_096_299_361_2, epsilon = 1e-9);
        for p in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(norm_quantile(p), Err(crate::Error::Domain(_))));
        }
    }

    #[test]
    fn normal_quantile_inverts_cdf() {
        // Beyond x ≈ 5.5, Φ(x) is within 1e-8 of 1 and the round trip is
        // limited by the spacing of doubles near 1, not by the inverse.
        for i in -800..=550 {
            let x = i as f64 / 100.0;
            let back = norm_quantile(norm_cdf(x)).unwrap();
            assert!((back - x).abs() < 1e-9, "x = {x}, back = {back}");
        }
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((norm_cdf(norm_quantile(p).unwrap()) - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn incomplete_beta_values() {
        assert_abs_diff_eq!(inc_beta(2.5, 3.5, 0.3).unwrap(), 0.296_752_989_295_666_46, epsilon = 1e-13);
        assert_abs_diff_eq!(inc_beta(0.5, 500_000.0, 1e-6).unwrap(), 0.682_689_492_137_146_1, epsilon = 1e-10);
        assert_abs_diff_eq!(inc_beta(30.0, 40.0, 0.45).unwrap(), 0.644_748_008_558_566_6, epsilon = 1e-13);
        assert_abs_diff_eq!(inc_beta(4.0, 25.0, 0.1).unwrap(), 0.305_433_696_908_132_8, epsilon = 1e-12);
        assert_eq!(inc_beta(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(inc_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
        assert!(inc_beta(0.0, 1.0, 0.5).is_err());
        assert!(inc_beta(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn t_cdf_values() {
        assert_eq!(t_cdf(0.0, 7.0).unwrap(), 0.5);
        assert_abs_diff_eq!(t_cdf(2.101, 18.0).unwrap(), 0.975_003_818_561_018_3, epsilon = 1e-12);
        assert_abs_diff_eq!(t_cdf(-1.5, 3.0).unwrap(), 0.115_291_932_622_411_41, epsilon = 1e-12);
        assert_abs_diff_eq!(t_cdf(0.7, 2.5).unwrap(), 0.728_297_528_405_225_9, epsilon = 1e-12);
        assert_abs_diff_eq!(t_cdf(1.0, 1e6).unwrap(), norm_cdf(1.0), epsilon = 1e-3);
        assert!(t_cdf(1.0, 0.0).is_err());
        assert!(t_cdf(1.0, -3.0).is_err());
    }

    #[test]
    fn t_quantile_values() {
        assert_eq!(t_quantile(0.5, 7.0).unwrap(), 0.0);
        assert_abs_diff_eq!(t_quantile(0.975, 18.0).unwrap(), 2.100_922_040_240_96, epsilon = 1e-10);
        assert_abs_diff_eq!(t_quantile(0.025, 5.0).unwrap(), -2.570_581_835_636_314_6, epsilon = 1e-10);
        assert_abs_diff_eq!(t_quantile(0.99, 1.0).unwrap(), 31.820_515_953_757_58, epsilon = 1e-8);
        assert_abs_diff_eq!(t_quantile(0.975, 1e6).unwrap(), 1.96, epsilon = 1e-3);
        assert!(t_quantile(1.0, 3.0).is_err());
        assert!(t_quantile(0.3, 0.0).is_err());
    }

    #[test]
    fn f_quantile_values() {
        let q = f_quantile_central(0.05, 1.0, 18.0).unwrap();
        assert_abs_diff_eq!(q, 4.413_873_419_170_566, epsilon = 1e-10);
        let t = t_quantile(0.975, 18.0).unwrap();
        assert_abs_diff_eq!(q, t * t, epsilon = 1e-9);
        assert_abs_diff_eq!(f_quantile_central(0.01, 3.0, 40.0).unwrap(), 4.312_569_212_492_142, epsilon = 1e-9);
        // chi-square(1) median in the large-df2 limit
        assert_abs_diff_eq!(f_quantile_central(0.5, 1.0, 1e7).unwrap(), 0.454_936_423_119_572, epsilon = 1e-3);
        assert!(f_quantile_central(0.0, 1.0, 18.0).is_err());
        assert!(f_quantile_central(0.05, 0.0, 18.0).is_err());
    }

    #[test]
    fn noncentral_f_values() {
        let p = NoncentralFParams::new(1.0, 18.0, 7.9076).unwrap();
        assert_abs_diff_eq!(f_cdf_noncentral(4.4139, &p).unwrap(), 0.242_099_041_667_764_66, epsilon = 1e-9);
        let p = NoncentralFParams::new(3.0, 10.0, 5.0).unwrap();
        assert_abs_diff_eq!(f_cdf_noncentral(2.0, &p).unwrap(), 0.396_106_078_891_577_45, epsilon = 1e-9);
        let p = NoncentralFParams::new(1.0, 198.0, 50.0).unwrap();
        assert_abs_diff_eq!(f_cdf_noncentral(1.0, &p).unwrap(), 6.612_111_827_366_761e-10, epsilon = 1e-12);
        let p = NoncentralFParams::new(2.0, 30.0, 120.0).unwrap();
        assert_abs_diff_eq!(f_cdf_noncentral(30.0, &p).unwrap(), 0.010_143_930_529_311_111, epsilon = 1e-9);
        assert_eq!(f_cdf_noncentral(0.0, &p).unwrap(), 0.0);
        assert!(f_cdf_noncentral(-1.0, &p).is_err());
        assert!(NoncentralFParams::new(1.0, 18.0, -1.0).is_err());
        assert!(NoncentralFParams::new(0.0, 18.0, 1.0).is_err());
    }

    #[test]
    fn noncentral_f_survival_complements_cdf() {
        for &(x, d1, d2, ncp) in &[(1.0, 1.0, 18.0, 3.0), (4.0, 2.0, 7.0, 40.0), (0.3, 5.0, 50.0, 0.5)] {
            let p = NoncentralFParams::new(d1, d2, ncp).unwrap();
            let s = f_cdf_noncentral(x, &p).unwrap() + f_sf_noncentral(x, &p).unwrap();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn noncentral_f_large_ncp_does_not_underflow() {
        // exp(-λ/2) underflows here, so summation has to start at the mode.
        let p = NoncentralFParams::new(1.0, 1000.0, 2000.0).unwrap();
        let c = f_cdf_noncentral(2001.0, &p).unwrap();
        assert!(c > 0.3 && c < 0.7, "cdf near the mean should be central, got {c}");
    }

    #[test]
    fn noncentral_reduces_to_central() {
        for i in 1..50 {
            let x = i as f64 * 0.2;
            let p = NoncentralFParams::new(1.0, 18.0, 0.0).unwrap();
            assert_eq!(f_cdf_noncentral(x, &p).unwrap(), f_cdf_central(x, 1.0, 18.0).unwrap());
            // tiny ncp is continuous with the central case
            let q = NoncentralFParams::new(1.0, 18.0, 1e-12).unwrap();
            assert_abs_diff_eq!(f_cdf_noncentral(x, &q).unwrap(), f_cdf_central(x, 1.0, 18.0).unwrap(), epsilon = 1e-11);
        }
    }

    #[test]
    fn truncated_second_moment_values() {
        assert_eq!(truncated_tail_second_moment(f64::NEG_INFINITY), 1.0);
        assert_abs_diff_eq!(truncated_tail_second_moment(-40.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(truncated_tail_second_moment(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(truncated_tail_second_moment(1.6449), 0.219_630_092_427_387_18, epsilon = 1e-14);
        assert_eq!(truncated_tail_second_moment(f64::INFINITY), 0.0);
    }
}
