use serde::{Deserialize, Serialize};

use super::criterion::CriterionContext;
use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{check_budget, gcd, GroupHandle};

/// Tuples enumerated per instance when checking the translation map explicitly.
const SOLUTION_SCAN_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianRoot {
    pub d: ElementKey,
    /// An `r` with `r^{p^t} = d`; `x_l -> x_l r^{n-1}` carries the solutions
    /// at `d` onto the solutions at `d^n`.
    pub root: ElementKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianBijectionCertificate {
    pub base: String,
    pub p: u64,
    pub t: u32,
    pub method: String,
    pub roots: Vec<AbelianRoot>,
    /// Instances whose solution set was enumerated and mapped explicitly.
    pub instances_mapped: u64,
    pub solutions_mapped: u64,
    pub holds: bool,
}

/// Certificate that `A wr Z_p` satisfies the tuple criterion at `p^t` for abelian `A`.
///
/// For every `p^t`-th power `d` a root `r` is exhibited. In an abelian group
/// translation by `r^{n-1}` multiplies `x_l^{p^t}` and
/// `(u0 x_1 ... x_0)^{p^{t-1}}` by `d^{n-1}`, so it is a bijection between
/// the solutions at `d` and at `d^n`. Where the solution sets are small the
/// map is also applied to every solution and the counts are compared.
pub fn abelian_bijection_certificate(
    base: &GroupHandle,
    p: u64,
    t: u32,
) -> Result<AbelianBijectionCertificate> {
    if !base.is_abelian()? {
        return Err(FszError::domain(format!("{} is not abelian", base.descriptor())));
    }
    let ctx = CriterionContext::new(base, p, t)?;
    let ix = ctx.ix.clone();
    let pt = p.pow(t);
    let outer = ix.power_map(pt);
    let inner = ix.power_map(pt / p);
    let mut cert = AbelianBijectionCertificate {
        base: base.descriptor(),
        p,
        t,
        method: "abelian-bijection".into(),
        roots: Vec::new(),
        instances_mapped: 0,
        solutions_mapped: 0,
        holds: true,
    };
    let mut image: Vec<u32> = outer.to_vec();
    image.sort_unstable();
    image.dedup();
    let orders = ix.element_orders();
    for &d in &image {
        let root = (0..ix.len() as u32)
            .find(|&r| outer[r as usize] == d)
            .expect("d lies in the image");
        if ix.power(root, pt) != d {
            cert.holds = false;
        }
        cert.roots.push(AbelianRoot {
            d: ix.key(d),
            root: ix.key(root),
        });

        let fiber: Vec<u32> = (0..ix.len() as u32).filter(|&x| outer[x as usize] == d).collect();
        let tuples = (fiber.len() as u128).pow(p as u32);
        if tuples > SOLUTION_SCAN_LIMIT {
            continue;
        }
        check_budget("abelian solution scan", tuples * ix.len() as u128)?;
        let ord = orders[d as usize] as u64;
        let tables_d = ctx.tables(d)?;
        for n in 2..=p * ord {
            if gcd(n, p) != 1 {
                continue;
            }
            let dn = ix.power(d, n);
            let shift = ix.power(root, n - 1);
            let tables_dn = ctx.tables(dn)?;
            for u0 in 0..ix.len() as u32 {
                let mut mapped = 0u128;
                for code in 0..tuples {
                    let mut c = code;
                    let mut xs = Vec::with_capacity(p as usize);
                    for _ in 0..p {
                        xs.push(fiber[(c % fiber.len() as u128) as usize]);
                        c /= fiber.len() as u128;
                    }
                    let prod = xs.iter().fold(u0, |acc, &x| ix.mul(acc, x));
                    if inner[prod as usize] != d {
                        continue;
                    }
                    let ys: Vec<u32> = xs.iter().map(|&x| ix.mul(x, shift)).collect();
                    let yprod = ys.iter().fold(u0, |acc, &y| ix.mul(acc, y));
                    let ok = ys.iter().all(|&y| outer[y as usize] == dn)
                        && inner[yprod as usize] == dn;
                    if !ok {
                        cert.holds = false;
                    }
                    mapped += 1;
                }
                if mapped != ctx.count(&tables_d, u0) || mapped != ctx.count(&tables_dn, u0) {
                    cert.holds = false;
                }
                cert.instances_mapped += 1;
                cert.solutions_mapped += mapped as u64;
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_abelian, build_wreath};

    #[test]
    fn cyclic_nine_over_three() {
        let a = build_abelian(&[9]).unwrap();
        for t in [1, 2] {
            let c = abelian_bijection_certificate(&a, 3, t).unwrap();
            assert!(c.holds);
            assert!(c.solutions_mapped > 0);
        }
    }

    #[test]
    fn refuses_nonabelian_base() {
        let a = build_abelian(&[2]).unwrap();
        let w = build_wreath(&a, 2).unwrap();
        assert!(matches!(
            abelian_bijection_certificate(&w, 2, 1),
            Err(FszError::Domain(_))
        ));
    }
}
