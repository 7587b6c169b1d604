//! Power and sample-size calculations for extreme-sampling designs.
//!
//! The slope test on the selected subset is an F(1, n_S − 2) test. Selecting
//! the two `γ/2` tails of a normal response inflates the response variance by
//! `2/γ · ∫_{z}^{∞} x² φ(x) dx` (`z` the upper `γ/2` normal quantile), and the
//! effect size `f²` grows by the same factor, giving noncentrality
//! `n_F · f² · 2∫_{z}^{∞} x² φ(x) dx`.

use serde::{Deserialize, Serialize};

use crate::dist::{f_quantile_central, f_sf_noncentral, norm_quantile, truncated_tail_second_moment, NoncentralFParams};
use crate::error::{domain, Error, Result};

const MAX_FULL_SAMPLE: u64 = 10_000_000;

/// Cohen's `f² = ρ²/(1 − ρ²)` for a simple regression with correlation `ρ`.
pub fn cohen_f2(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(domain(format!("correlation must lie in (-1, 1), got {rho}")));
    }
    Ok(rho * rho / (1.0 - rho * rho))
}

/// Ratio of the two-tail-selected response variance to the full variance.
pub fn variance_inflation(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if gamma == 1.0 {
        return Ok(1.0);
    }
    let z = norm_quantile(1.0 - gamma / 2.0)?;
    Ok(2.0 * truncated_tail_second_moment(z) / gamma)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("sampling fraction must lie in (0, 1], got {gamma}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("significance level must lie in (0, 1), got {alpha}")))
    }
}

fn check_effect(effect_f: f64) -> Result<()> {
    if effect_f >= 0.0 && effect_f.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("effect size f must be finite and >= 0, got {effect_f}")))
    }
}

/// Nearest integer to `gamma · n_full`, ties away from zero.
pub fn selected_size(n_full: u64, gamma: f64) -> u64 {
    (gamma * n_full as f64).round() as u64
}

/// A planned extreme-sampling design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    n_full: u64,
    gamma: f64,
    effect_f: f64,
    alpha: f64,
}

impl DesignSpec {
    pub fn new(n_full: u64, gamma: f64, effect_f: f64, alpha: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_alpha(alpha)?;
        check_effect(effect_f)?;
        if n_full < 5 {
            return Err(domain(format!("full sample size must be >= 5, got {n_full}")));
        }
        if selected_size(n_full, gamma) < 3 {
            return Err(domain(format!(
                "γ·n_F = {} rounds below 3 selected subjects",
                gamma * n_full as f64
            )));
        }
        Ok(Self {
            n_full,
            gamma,
            effect_f,
            alpha,
        })
    }

    pub fn n_full(&self) -> u64 {
        self.n_full
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn effect_f(&self) -> f64 {
        self.effect_f
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_selected(&self) -> u64 {
        selected_size(self.n_full, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    pub power: f64,
    pub ncp: f64,
    pub df1: u64,
    pub df2: u64,
    pub variance_inflation: f64,
}

/// Upper-tail probability of F(1, df2, ncp) beyond the upper-α central quantile.
fn f_test_power(df2: f64, ncp: f64, alpha: f64) -> Result<f64> {
    let critical = f_quantile_central(alpha, 1.0, df2)?;
    f_sf_noncentral(critical, &NoncentralFParams::new(1.0, df2, ncp)?)
}

/// Power of the level-α slope t-test with `n` complete pairs.
pub fn power_full(n: u64, effect_f: f64, alpha: f64) -> Result<f64> {
    if n < 4 {
        return Err(domain(format!("sample size must be >= 4, got {n}")));
    }
    check_effect(effect_f)?;
    check_alpha(alpha)?;
    f_test_power((n - 2) as f64, n as f64 * effect_f * effect_f, alpha)
}

/// Power of the reverse-regression test on the extreme subset.
pub fn power_eods(spec: &DesignSpec) -> Result<PowerResult> {
    let n_s = spec.n_selected();
    if n_s < 3 {
        return Err(domain("need at least 3 selected subjects"));
    }
    let df2 = n_s - 2;
    let inflation = variance_inflation(spec.gamma)?;
    let ncp = spec.n_full as f64 * spec.effect_f * spec.effect_f * spec.gamma * inflation;
    let power = f_test_power(df2 as f64, ncp, spec.alpha)?;
    Ok(PowerResult {
        power,
        ncp,
        df1: 1,
        df2,
        variance_inflation: inflation,
    })
}

/// Smallest design found by [`min_gamma_for_power`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPlan {
    pub gamma: f64,
    pub n_selected: u64,
    pub achieved_power: f64,
}

impl GammaPlan {
    pub fn per_tail(&self) -> (u64, u64) {
        let low = self.n_selected / 2;
        (low, self.n_selected - low)
    }
}

/// Smallest even `n_S` (half per tail) whose design reaches `target_power`.
///
/// If only full sampling of an odd-sized cohort suffices, returns `n_S = n_F`.
pub fn min_gamma_for_power(
    n_full: u64,
    effect_f: f64,
    alpha: f64,
    target_power: f64,
) -> Result<GammaPlan> {
    check_alpha(alpha)?;
    check_effect(effect_f)?;
    if !(target_power > alpha && target_power < 1.0) {
        return Err(domain(format!(
            "target power must lie in (alpha, 1), got {target_power}"
        )));
    }
    let full = power_eods(&DesignSpec::new(n_full, 1.0, effect_f, alpha)?)?;
    if full.power < target_power {
        return Err(Error::Infeasible(format!(
            "testing all {n_full} subjects gives power {:.4} < {target_power}",
            full.power
        )));
    }
    for n_selected in (4..=n_full).step_by(2) {
        let gamma = n_selected as f64 / n_full as f64;
        let result = power_eods(&DesignSpec::new(n_full, gamma, effect_f, alpha)?)?;
        if result.power >= target_power {
            return Ok(GammaPlan {
                gamma,
                n_selected,
                achieved_power: result.power,
            });
        }
    }
    Ok(GammaPlan {
        gamma: 1.0,
        n_selected: n_full,
        achieved_power: full.power,
    })
}

/// Smallest `n_F` reaching `target_power` at a fixed sampling fraction.
pub fn min_nfull_for_power(gamma: f64, effect_f: f64, alpha: f64, target_power: f64) -> Result<u64> {
    check_gamma(gamma)?;
    check_alpha(alpha)?;
    check_effect(effect_f)?;
    if !(target_power > alpha && target_power < 1.0) {
        return Err(domain(format!(
            "target power must lie in (alpha, 1), got {target_power}"
        )));
    }
    let power_at = |n: u64| -> Result<f64> {
        Ok(power_eods(&DesignSpec::new(n, gamma, effect_f, alpha)?)?.power)
    };
    // smallest admissible cohort: n_F >= 5 and round(γ n_F) >= 3
    let mut lo = 5;
    while selected_size(lo, gamma) < 3 {
        lo += 1;
    }
    if power_at(lo)? >= target_power {
        return Ok(lo);
    }
    let mut hi = lo;
    loop {
        hi = (hi * 2).min(MAX_FULL_SAMPLE);
        if power_at(hi)? >= target_power {
            break;
        }
        if hi == MAX_FULL_SAMPLE {
            return Err(Error::Infeasible(format!(
                "no full sample size up to {MAX_FULL_SAMPLE} reaches power {target_power}"
            )));
        }
        lo = hi;
    }
    // invariant: power(lo) < target <= power(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if power_at(mid)? >= target_power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
