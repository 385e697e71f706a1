use serde::{Deserialize, Serialize};

use crate::constructions::build_central_product_cyclic;
use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::GroupHandle;
use crate::kinds::wreath::{classify, WreathClassShape};
use crate::kinds::{CentralProduct, WreathGroup};

fn as_wreath(g: &GroupHandle) -> Result<&WreathGroup> {
    g.downcast::<WreathGroup>()
        .ok_or_else(|| FszError::domain(format!("{} is not a wreath product", g.descriptor())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralizerCase {
    /// Nonzero shift: `Delta C_D(x) * <g>`.
    Shifted,
    /// Zero shift, conjugate components: `C_D(d) wr Z_p`.
    Diagonal,
    /// Zero shift otherwise: `C_D(d_0) x ... x C_D(d_{p-1})`.
    Mixed,
}

/// The case of `g` and the centralizer order it predicts.
pub fn predicted_centralizer_order(wreath: &GroupHandle, g: &ElementKey) -> Result<(CentralizerCase, u128)> {
    let w = as_wreath(wreath)?;
    wreath.validate(g)?;
    let base = w.base();
    let p = w.degree() as u128;
    Ok(match classify(w, wreath, g)? {
        WreathClassShape::Shifted { x, .. } => (CentralizerCase::Shifted, p * base.centralizer(&x)?.order()),
        WreathClassShape::Diagonal { d, .. } => {
            let c = base.centralizer(&d)?.order();
            (CentralizerCase::Diagonal, c.pow(w.degree()) * p)
        }
        WreathClassShape::Mixed => {
            let mut order = 1u128;
            for l in 0..w.degree() as usize {
                order *= base.centralizer(&w.component(g, l))?.order();
            }
            (CentralizerCase::Mixed, order)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedCentralizerCheck {
    pub wreath: String,
    pub element: ElementKey,
    pub model: String,
    pub order: u128,
    /// Elements `a` of the model for which `phi(a s) = phi(a) phi(s)` was
    /// checked against every generator `s`.
    pub elements_checked: u64,
    pub holds: bool,
}

/// Checks that `C_G(g)` for `g = (x, 1, ..., 1, i)`, `i != 0`, is the central
/// product `C_D(x) * <y>` with `y^p = x`.
///
/// `phi(h, k) = (h, ..., h, 0) g^k` is verified to be a homomorphism on all
/// of the model (against each generator), injective by normal form, landing
/// in `C_G(g)`, and the model order matches the predicted centralizer order.
pub fn verify_shifted_centralizer(wreath: &GroupHandle, x: &ElementKey, shift: u64) -> Result<ShiftedCentralizerCheck> {
    let w = as_wreath(wreath)?;
    let p = w.degree() as u64;
    if shift % p == 0 {
        return Err(FszError::domain("the shift must be nonzero modulo p"));
    }
    let base = w.base();
    base.validate(x)?;
    let mut comps = vec![base.identity(); p as usize];
    comps[0] = x.clone();
    let g = w.assemble(&comps, shift);
    let cx = base.centralizer(x)?;
    let model = build_central_product_cyclic(&cx, p, x)?;
    let cp = model.downcast::<CentralProduct>().expect("central product");

    let mut g_pows = vec![wreath.identity()];
    for _ in 1..p {
        let next = wreath.multiply(g_pows.last().unwrap(), &g)?;
        g_pows.push(next);
    }
    let phi = |a: &ElementKey| -> Result<ElementKey> {
        let (h, k) = cp.split(a);
        wreath.multiply(&w.diagonal(&h, 0), &g_pows[k as usize])
    };

    let (_, predicted) = predicted_centralizer_order(wreath, &g)?;
    let mut holds = predicted == model.order();
    let gens = model.generators();
    let gen_images: Vec<ElementKey> = gens.iter().map(&phi).collect::<Result<_>>()?;
    for gi in &gen_images {
        holds &= wreath.commute(gi, &g)?;
    }
    let mut checked = 0u64;
    for a in model.enumerate()? {
        let fa = phi(&a)?;
        if checked > 0 && wreath.is_identity(&fa) {
            holds = false;
        }
        for (s, fs) in gens.iter().zip(&gen_images) {
            holds &= phi(&model.multiply(&a, s)?)? == wreath.multiply(&fa, fs)?;
        }
        checked += 1;
    }
    Ok(ShiftedCentralizerCheck {
        wreath: wreath.descriptor(),
        element: g,
        model: model.descriptor(),
        order: model.order(),
        elements_checked: checked,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_cyclic, build_wreath};

    #[test]
    fn shifted_model_on_small_wreath() {
        let d = build_wreath(&build_cyclic(2).unwrap(), 2).unwrap();
        let w = build_wreath(&d, 2).unwrap();
        for x in d.enumerate().unwrap() {
            let c = verify_shifted_centralizer(&w, &x, 1).unwrap();
            assert!(c.holds, "{x}");
            let brute = w.centralizer_brute(&c.element).unwrap().order();
            assert_eq!(brute, c.order);
        }
    }
}
