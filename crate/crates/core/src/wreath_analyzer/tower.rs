use serde::{Deserialize, Serialize};

use super::abelian::abelian_bijection_certificate;
use super::certificates::CheckOptions;
use super::criterion::{wreath_condition_test, WreathCriterionReport};
use crate::constructions::{build_cyclic, build_wreath};
use crate::error::{FszError, Result};
use crate::fsz::fsz_m_test;
use crate::group::is_prime;

/// Largest base group on which the tuple criterion is run as a cross-check.
const CRITERION_LIMIT: u128 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStep {
    pub level: u32,
    /// The property established at this level is `FSZ_m`.
    pub m: u64,
    pub exponent: u64,
    pub argument: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectCheck {
    pub m: u64,
    pub order: u128,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerClaimReport {
    pub p: u64,
    pub j: u32,
    pub m: u64,
    /// `log_p` of the tower order, `1 + p + ... + p^{j-1}`.
    pub log_order: u64,
    pub steps: Vec<TowerStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<DirectCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<WreathCriterionReport>,
    pub holds: bool,
}

/// The `j`-fold tower `Z_p wr ... wr Z_p` is `FSZ_{p^{j-1}}`.
///
/// Induction on the level: `Z_p` is trivially `FSZ_1`, `Z_p wr Z_p` is FSZ
/// by the abelian certificate, and a level-`k` tower of exponent `p^k` that
/// is `FSZ_{p^{k-1}}` gives an `FSZ_{p^k}` tower one level up. Small towers
/// are also tested directly.
pub fn sylow_tower_claim(p: u64, j: u32, options: &CheckOptions) -> Result<TowerClaimReport> {
    if !is_prime(p) {
        return Err(FszError::domain(format!("{p} is not a prime")));
    }
    if j == 0 {
        return Err(FszError::domain("a tower needs at least one level"));
    }
    let m = p.pow(j - 1);
    let log_order: u64 = (0..j).map(|k| p.pow(k)).sum();
    let mut report = TowerClaimReport {
        p,
        j,
        m,
        log_order,
        steps: Vec::new(),
        direct: None,
        criterion: None,
        holds: false,
    };

    let mut tower = build_cyclic(p)?;
    report.steps.push(TowerStep {
        level: 1,
        m: 1,
        exponent: tower.exponent()?,
        argument: "every group is FSZ_1".into(),
        holds: true,
    });
    // `tower` is level `level - 1`; the top level is only built for the direct check
    for level in 2..=j {
        let prev = report.steps.last().expect("level 1 is present").clone();
        let exp_below = tower.exponent()?;
        // exp(D wr Z_p) = p exp(D) for a p-group D
        let exponent = exp_below * p;
        let step = if level == 2 {
            let cert = abelian_bijection_certificate(&tower, p, 1)?;
            TowerStep {
                level,
                m: p,
                exponent,
                argument: format!("wr(Z({p}),{p}) is FSZ by the abelian certificate"),
                holds: cert.holds,
            }
        } else {
            let k = level - 1;
            TowerStep {
                level,
                m: p.pow(k),
                exponent,
                argument: format!(
                    "level {k} has exponent {p}^{k} and is FSZ_{}, so its wreath product is FSZ_{}",
                    prev.m,
                    p.pow(k)
                ),
                holds: prev.holds && exp_below == p.pow(k),
            }
        };
        report.steps.push(step);
        if level < j {
            tower = build_wreath(&tower, p)?;
        }
    }

    if let Some(order) = (p as u128).checked_pow(log_order as u32) {
        if order <= options.direct_limit {
            let top = if j == 1 { tower.clone() } else { build_wreath(&tower, p)? };
            report.direct = Some(DirectCheck {
                m,
                order,
                holds: fsz_m_test(&top, m, options.fsz.strategy.as_ref())?.holds,
            });
        }
    }
    if j >= 3 && tower.order() <= CRITERION_LIMIT {
        report.criterion = Some(wreath_condition_test(&tower, p, j - 1, &options.fsz)?);
    }
    report.holds = report.steps.iter().all(|s| s.holds)
        && report.direct.as_ref().map_or(true, |d| d.holds)
        && report.criterion.as_ref().map_or(true, |c| c.certifies_wreath_fsz());
    Ok(report)
}
