use serde::{Deserialize, Serialize};

use super::abelian::{abelian_bijection_certificate, AbelianBijectionCertificate};
use super::linear::{linear_image_membership, power_sum_system, unshift, Membership};
use super::tower::{sylow_tower_claim, TowerClaimReport};
use crate::constructions::{
    build_abelian, build_b_matrix, build_cyclic, build_f, build_wreath, build_x_matrix, FpjSpec,
};
use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::fsz::{fsz_m_test, fsz_test, FszOptions};
use crate::group::{is_prime, GroupHandle};
use crate::kinds::WreathGroup;
use crate::modular::{ActionMatrix, MixedModulusVector};

/// Groups up to this order are enumerated for the identity checks.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
/// Sampled elements when a group is too large to enumerate.
const SAMPLE_SIZE: u64 = 1 << 16;
/// General-solver runs per branch; the explicit witness is checked on every tuple.
const SOLVER_LIMIT: u64 = 4096;

#[derive(Clone)]
pub struct CheckOptions {
    /// Enumerate every admissible tuple instead of one per rotation class.
    pub full_tuples: bool,
    /// Groups up to this order are also tested directly by the FSZ engine.
    pub direct_limit: u128,
    pub fsz: FszOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            full_tuples: false,
            direct_limit: 1 << 15,
            fsz: FszOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// `exhaustive`, `sampled`, `matrix` or `engine`.
    pub how: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCertificate {
    pub branch: String,
    pub method: String,
    /// Targets `d`, as coordinate vectors of the base module.
    pub targets: Vec<Vec<u64>>,
    /// Admissible tuples (or rotation classes) per target.
    pub tuples: u64,
    /// `(tuple, d)` pairs on which the explicit preimage was verified.
    pub witness_checks: u64,
    /// `(tuple, d)` pairs also decided by the general solver.
    pub solver_checks: u64,
    /// Preimage `(r_0, ..., r_{p-1})` for the first nonzero target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abelian: Option<AbelianBijectionCertificate>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralCertificate {
    pub claim: String,
    pub p: u64,
    pub extrapolated: bool,
    pub rotation_reduced: bool,
    pub identities: Vec<IdentityCheck>,
    pub branches: Vec<BranchCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerClaimReport>,
    /// Full FSZ test of the group itself, when it is small enough.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<bool>,
    pub holds: bool,
}

impl StructuralCertificate {
    fn finish(mut self) -> Self {
        self.holds = self.identities.iter().all(|c| c.holds)
            && self.branches.iter().all(|b| b.holds)
            && self.tower.as_ref().map_or(true, |t| t.holds)
            && self.direct.unwrap_or(true);
        self
    }
}

/// Tuples in `[1, p)^p`, optionally one per rotation class (the least rotation).
pub fn admissible_tuples(p: u64, full: bool) -> Vec<Vec<u64>> {
    let k = p as usize;
    let radix = p - 1;
    let total = radix.pow(p as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut t = Vec::with_capacity(k);
        for _ in 0..k {
            t.push(code % radix + 1);
            code /= radix;
        }
        if full || (1..k).all(|r| t[..] <= [&t[r..], &t[..r]].concat()[..]) {
            out.push(t);
        }
    }
    out
}

fn powers(b: &ActionMatrix, order: u64) -> Result<Vec<ActionMatrix>> {
    let mut out = vec![ActionMatrix::identity(b.row_moduli())];
    for _ in 1..order {
        let next = out.last().unwrap().compose(b)?;
        out.push(next);
    }
    Ok(out)
}

/// Checks `(d, ..., d)` lies in the image of the power-sum map for every
/// tuple, by the supplied explicit preimage and (up to a limit) by the
/// general solver.
fn linear_branch(
    branch: &str,
    x_map: &ActionMatrix,
    b_powers: &[ActionMatrix],
    tuples: &[Vec<u64>],
    targets: &[(MixedModulusVector, Vec<MixedModulusVector>)],
) -> Result<BranchCertificate> {
    let mut cert = BranchCertificate {
        branch: branch.into(),
        method: "linear-image".into(),
        targets: targets.iter().map(|(d, _)| d.entries().to_vec()).collect(),
        tuples: tuples.len() as u64,
        witness_checks: 0,
        solver_checks: 0,
        witness: None,
        abelian: None,
        holds: true,
    };
    for (d, r) in targets {
        if cert.witness.is_none() && !d.is_zero() {
            cert.witness = Some(r.iter().map(|v| v.entries().to_vec()).collect());
        }
        for tuple in tuples {
            let sys = power_sum_system(x_map, b_powers, tuple, d);
            let y = unshift(b_powers, tuple, r)?;
            if !sys.is_solution(&y)? {
                cert.holds = false;
            }
            cert.witness_checks += 1;
            if cert.solver_checks < SOLVER_LIMIT {
                match linear_image_membership(&sys)? {
                    Membership::Member { preimage } => {
                        if !sys.is_solution(&preimage)? {
                            cert.holds = false;
                        }
                    }
                    Membership::NonMember => cert.holds = false,
                }
                cert.solver_checks += 1;
            }
        }
    }
    Ok(cert)
}

/// Elements of a group given by an index range, all of them or an evenly spread sample.
fn codes(total: u128) -> (Vec<u128>, &'static str) {
    if total <= EXHAUSTIVE_LIMIT {
        return ((0..total).collect(), "exhaustive");
    }
    // a stride coprime to `total`, so the codes are distinct
    let gcd = |mut a: u128, mut b: u128| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut stride = total / SAMPLE_SIZE as u128 + 1;
    while gcd(stride, total) != 1 {
        stride += 1;
    }
    (
        (0..SAMPLE_SIZE as u128).map(|k| (k * stride) % total).collect(),
        "sampled",
    )
}

fn decode(mut code: u128, moduli: &[u64]) -> Vec<i64> {
    moduli
        .iter()
        .map(|&m| {
            let c = (code % m as u128) as i64;
            code /= m as u128;
            c
        })
        .collect()
}

/// `F(p,1) wr Z_p` satisfies the tuple criterion at `m = p`.
///
/// `p`-th powers in `F(p,1)` are `a_1^{p d_1}` or `a_1^{p d_1} a_p^{-d_1}`.
/// The first kind only has `p`-th roots in the base module `Q`, which reduces
/// it to `Q wr Z_p` and the abelian certificate. For the second kind the
/// tuple equations become membership of `(d, ..., d)` in the image of
/// `(y_l) -> (X y_0, ..., X y_{p-1}, sum_l B^{s_l} y_l)`, which is certified
/// for every admissible tuple with the preimage `r_0 = (d_1, 0, ..., 0, -d_1)`,
/// `r_l = (d_1, 0, ..., 0)`.
pub fn fp1_wreath_fszp_check(p: u64, options: &CheckOptions) -> Result<StructuralCertificate> {
    let spec = FpjSpec::new(p, 1)?;
    let moduli = spec.base_moduli();
    let k = spec.rank();
    let b = build_b_matrix(spec);
    let x = build_x_matrix(spec, 0)?;
    let b_powers = powers(&b, p)?;
    let mut cert = StructuralCertificate {
        claim: format!("wr(F({p},1),{p}) is FSZ_{p}"),
        p,
        extrapolated: p == 2,
        rotation_reduced: !options.full_tuples,
        identities: Vec::new(),
        branches: Vec::new(),
        tower: None,
        direct: None,
        holds: false,
    };

    cert.identities.push(IdentityCheck {
        name: "X B = X".into(),
        how: "matrix".into(),
        holds: x.compose(&b)? == x,
    });
    let mut x_shape = true;
    for col in 0..k {
        let image = x.apply(&MixedModulusVector::unit(&moduli, col))?;
        let mut want = vec![0i64; k];
        if col == 0 {
            want[0] = p as i64;
            want[k - 1] -= 1;
        }
        x_shape &= image == MixedModulusVector::new(&want, &moduli)?;
    }
    cert.identities.push(IdentityCheck {
        name: "X e_1 = (p, 0, ..., 0, -1) and X e_k = 0 for k > 1".into(),
        how: "matrix".into(),
        holds: x_shape,
    });

    // p-th powers of F(p,1): shape, and roots of a_1^{p d_1} lie in Q
    let f = build_f(spec)?;
    let mut all_moduli = moduli.clone();
    all_moduli.push(p);
    let (sample, how) = codes(f.order());
    let mut shapes_ok = true;
    let mut roots_in_q = true;
    for code in sample {
        let coords = decode(code, &all_moduli);
        let a = ElementKey::new(
            coords.iter().zip(&all_moduli).map(|(&c, &m)| (c as u64 % m) as u32),
        );
        let pw = f.power(&a, p as i64)?;
        let c = pw.coords();
        let d1 = (c[0] as u64 / p) as i64;
        let first = c[0] as u64 % p == 0 && c[1..k - 1].iter().all(|&v| v == 0) && c[k] == 0;
        let last = c[k - 1] as i64;
        let plain = last == 0;
        let twisted = (last + d1).rem_euclid(p as i64) == 0;
        shapes_ok &= first && (plain || twisted);
        if plain && d1 % p as i64 != 0 {
            roots_in_q &= coords[k] == 0;
        }
    }
    cert.identities.push(IdentityCheck {
        name: "p-th powers are a1^(p d1) or a1^(p d1) a_p^(-d1)".into(),
        how: how.into(),
        holds: shapes_ok,
    });
    cert.identities.push(IdentityCheck {
        name: "p-th roots of a1^(p d1) with p not dividing d1 lie in Q".into(),
        how: how.into(),
        holds: roots_in_q,
    });
    if f.order() <= options.direct_limit {
        cert.identities.push(IdentityCheck {
            name: format!("F({p},1) is FSZ_{p}"),
            how: "engine".into(),
            holds: fsz_m_test(&f, p, options.fsz.strategy.as_ref())?.holds,
        });
    }

    // a_1^{p d_1}, including d = 1 where d^n = d
    let q = build_abelian(&moduli)?;
    let ab = abelian_bijection_certificate(&q, p, 1)?;
    cert.branches.push(BranchCertificate {
        branch: "d = a1^(p d1)".into(),
        method: "abelian-bijection".into(),
        targets: (0..p)
            .map(|d1| {
                let mut v = vec![0u64; k];
                v[0] = p * d1;
                v
            })
            .collect(),
        tuples: 0,
        witness_checks: 0,
        solver_checks: 0,
        witness: None,
        holds: ab.holds,
        abelian: Some(ab),
    });

    let tuples = admissible_tuples(p, options.full_tuples);
    let mut targets = Vec::new();
    for d1 in 1..p as i64 {
        let mut dv = vec![0i64; k];
        dv[0] = p as i64 * d1;
        dv[k - 1] = -d1;
        let d = MixedModulusVector::new(&dv, &moduli)?;
        let mut r0 = vec![0i64; k];
        r0[0] = d1;
        r0[k - 1] = -d1;
        let mut rl = vec![0i64; k];
        rl[0] = d1;
        let mut r = vec![MixedModulusVector::new(&r0, &moduli)?];
        for _ in 1..p {
            r.push(MixedModulusVector::new(&rl, &moduli)?);
        }
        targets.push((d, r));
    }
    cert.branches.push(linear_branch(
        "d = a1^(p d1) a_p^(-d1)",
        &x,
        &b_powers,
        &tuples,
        &targets,
    )?);
    Ok(cert.finish())
}

/// `(Z_p wr Z_p) wr Z_p` is FSZ.
///
/// `FSZ_p` comes from the tuple criterion: `p`-th powers in `Z_p wr Z_p`
/// are `J q = (sum q, ..., sum q)` for elements outside `Q = Z_p^p`, so
/// the equations become membership of `(d, ..., d)`, `d = (t, ..., t)`, in
/// the image of `(y_l) -> (J y_0, ..., J y_{p-1}, sum_l B^{s_l} y_l)`,
/// certified by `r_i = t e_i`. `FSZ_{p^2}` comes from the tower claim and
/// `FSZ_{p^3}` holds because `p^3` is the exponent.
pub fn sp3_check(p: u64, options: &CheckOptions) -> Result<StructuralCertificate> {
    if !is_prime(p) {
        return Err(FszError::domain(format!("{p} is not a prime")));
    }
    let k = p as usize;
    let moduli = vec![p; k];
    let mut b = ActionMatrix::zeros(k, k, &moduli);
    for i in 0..k {
        b.set((i + 1) % k, i, 1);
    }
    let j_map = ActionMatrix::from_signed(k, k, &vec![1; k * k], &moduli)?;
    let b_powers = powers(&b, p)?;
    let mut cert = StructuralCertificate {
        claim: format!("wr(wr(Z({p}),{p}),{p}) is FSZ"),
        p,
        extrapolated: false,
        rotation_reduced: !options.full_tuples,
        identities: Vec::new(),
        branches: Vec::new(),
        tower: None,
        direct: None,
        holds: false,
    };
    cert.identities.push(IdentityCheck {
        name: "J B = J".into(),
        how: "matrix".into(),
        holds: j_map.compose(&b)? == j_map,
    });

    let zp = build_cyclic(p)?;
    let d_group = build_wreath(&zp, p)?;
    let w = d_group.downcast::<WreathGroup>().expect("wreath");
    let mut all_moduli = moduli.clone();
    all_moduli.push(p);
    let (sample, how) = codes(d_group.order());
    let mut j_ok = true;
    let mut q_ok = true;
    let mut conj_ok = true;
    let bgen = d_group.element_by_name("s").expect("shift generator");
    for code in sample {
        let coords = decode(code, &all_moduli);
        let comps: Vec<ElementKey> = coords[..k].iter().map(|&c| ElementKey::new([c as u32])).collect();
        let a = w.assemble(&comps, coords[k] as u64);
        let pw = d_group.power(&a, p as i64)?;
        if coords[k] == 0 {
            q_ok &= d_group.is_identity(&pw);
            // right conjugation by the shift acts on Q as B
            let image = b.apply(&MixedModulusVector::new(&coords[..k], &moduli)?)?;
            let moved: Vec<ElementKey> = image.entries().iter().map(|&c| ElementKey::new([c as u32])).collect();
            conj_ok &= d_group.conjugate(&a, &bgen)? == w.assemble(&moved, 0);
        } else {
            let sum: i64 = coords[..k].iter().sum();
            let jq: Vec<ElementKey> = (0..k).map(|_| ElementKey::new([(sum as u64 % p) as u32])).collect();
            j_ok &= pw == w.assemble(&jq, 0);
        }
    }
    cert.identities.push(IdentityCheck {
        name: "p-th powers outside Q are J(q)".into(),
        how: how.into(),
        holds: j_ok,
    });
    cert.identities.push(IdentityCheck {
        name: "Q has exponent p".into(),
        how: how.into(),
        holds: q_ok,
    });
    cert.identities.push(IdentityCheck {
        name: "conjugation by the shift acts on Q as B".into(),
        how: how.into(),
        holds: conj_ok,
    });

    let base = abelian_bijection_certificate(&zp, p, 1)?;
    cert.branches.push(BranchCertificate {
        branch: format!("wr(Z({p}),{p}) is FSZ"),
        method: "abelian-bijection".into(),
        targets: Vec::new(),
        tuples: 0,
        witness_checks: 0,
        solver_checks: 0,
        witness: None,
        holds: base.holds,
        abelian: Some(base),
    });

    let tuples = admissible_tuples(p, options.full_tuples);
    let mut targets = Vec::new();
    for t in 0..p as i64 {
        let d = MixedModulusVector::new(&vec![t; k], &moduli)?;
        let r = (0..k)
            .map(|i| {
                let mut v = vec![0i64; k];
                v[i] = t;
                MixedModulusVector::new(&v, &moduli)
            })
            .collect::<Result<Vec<_>>>()?;
        targets.push((d, r));
    }
    cert.branches.push(linear_branch("d = (t, ..., t)", &j_map, &b_powers, &tuples, &targets)?);

    let exp_d = d_group.exponent()?;
    cert.identities.push(IdentityCheck {
        name: format!("exponent of the group is {}", p.pow(3)),
        how: "matrix".into(),
        holds: exp_d * p == p.pow(3),
    });
    cert.tower = Some(sylow_tower_claim(p, 3, options)?);

    let order_log = p * p + p + 1;
    if (p as u128).checked_pow(order_log as u32).map_or(false, |o| o <= options.direct_limit) {
        let g = build_wreath(&d_group, p)?;
        cert.direct = Some(fsz_test(&g, &options.fsz)?.holds);
    }
    Ok(cert.finish())
}

/// The wreath-product group named by a certificate, for direct cross-checks.
pub fn sp3_group(p: u64) -> Result<GroupHandle> {
    let zp = build_cyclic(p)?;
    build_wreath(&build_wreath(&zp, p)?, p)
}
