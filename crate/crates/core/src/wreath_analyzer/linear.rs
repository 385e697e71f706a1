use crate::error::{FszError, Result};
use crate::modular::{solve, ActionMatrix, MixedModulusVector};

/// A block system `sum_j blocks[i][j] x_j = target[i]`.
///
/// Unknown block `j` lives in the module with moduli `unknown_moduli[j]`;
/// equation block `i` is reduced by the row moduli of `target[i]`.
#[derive(Debug, Clone)]
pub struct LinearSystemOverMixedModuli {
    /// `None` is a zero block.
    pub blocks: Vec<Vec<Option<ActionMatrix>>>,
    pub unknown_moduli: Vec<Vec<u64>>,
    pub target: Vec<MixedModulusVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member { preimage: Vec<MixedModulusVector> },
    NonMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

impl LinearSystemOverMixedModuli {
    fn validate(&self) -> Result<()> {
        if self.blocks.len() != self.target.len() {
            return Err(FszError::Dimension(format!(
                "{} block rows for {} target blocks",
                self.blocks.len(),
                self.target.len()
            )));
        }
        for (i, row) in self.blocks.iter().enumerate() {
            if row.len() != self.unknown_moduli.len() {
                return Err(FszError::Dimension(format!(
                    "block row {i} has {} blocks for {} unknowns",
                    row.len(),
                    self.unknown_moduli.len()
                )));
            }
            for (j, b) in row.iter().enumerate() {
                let Some(b) = b else { continue };
                if b.rows() != self.target[i].len() || b.cols() != self.unknown_moduli[j].len() {
                    return Err(FszError::Dimension(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        self.target[i].len(),
                        self.unknown_moduli[j].len()
                    )));
                }
                if b.row_moduli() != self.target[i].moduli() {
                    return Err(FszError::Dimension(format!(
                        "block ({i},{j}) row moduli differ from the target's"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The whole system as one matrix over the concatenated unknowns.
    pub fn assemble(&self) -> Result<(ActionMatrix, Vec<u64>, MixedModulusVector)> {
        self.validate()?;
        let domain: Vec<u64> = self.unknown_moduli.concat();
        let row_moduli: Vec<u64> = self.target.iter().flat_map(|t| t.moduli().to_vec()).collect();
        let mut m = ActionMatrix::zeros(row_moduli.len(), domain.len(), &row_moduli);
        let mut r0 = 0;
        for (i, row) in self.blocks.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    for r in 0..b.rows() {
                        for c in 0..b.cols() {
                            m.set(r0 + r, c0 + c, b.get(r, c) as i64);
                        }
                    }
                }
                c0 += self.unknown_moduli[j].len();
            }
            r0 += self.target[i].len();
        }
        Ok((m, domain, MixedModulusVector::concat(&self.target)))
    }

    /// The left-hand side at `x`, one vector per equation block.
    pub fn evaluate(&self, x: &[MixedModulusVector]) -> Result<Vec<MixedModulusVector>> {
        self.validate()?;
        if x.len() != self.unknown_moduli.len() {
            return Err(FszError::Dimension(format!(
                "{} unknown blocks given, {} expected",
                x.len(),
                self.unknown_moduli.len()
            )));
        }
        self.blocks
            .iter()
            .zip(&self.target)
            .map(|(row, t)| {
                let mut acc = MixedModulusVector::zeros(t.moduli());
                for (b, xj) in row.iter().zip(x) {
                    if let Some(b) = b {
                        acc = acc.add(&b.apply(xj)?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_solution(&self, x: &[MixedModulusVector]) -> Result<bool> {
        Ok(self.evaluate(x)? == self.target)
    }
}

/// Decides whether the target lies in the image of the block map, returning a preimage if so.
pub fn linear_image_membership(sys: &LinearSystemOverMixedModuli) -> Result<Membership> {
    let (m, domain, target) = sys.assemble()?;
    Ok(match solve(&m, &domain, &target)? {
        Some(x) => {
            let widths: Vec<usize> = sys.unknown_moduli.iter().map(Vec::len).collect();
            let mut preimage = Vec::with_capacity(widths.len());
            let mut at = 0;
            for w in widths {
                let slice: Vec<i64> = x.entries()[at..at + w].iter().map(|&e| e as i64).collect();
                preimage.push(MixedModulusVector::new(&slice, &domain[at..at + w])?);
                at += w;
            }
            Membership::Member { preimage }
        }
        None => Membership::NonMember,
    })
}

/// The map `(y_0, ..., y_{p-1}) -> (X y_0, ..., X y_{p-1}, sum_l B^{s_l} y_l)`
/// with `s_l = t_0 + ... + t_{l-1}`, and target `(d, ..., d)`.
pub fn power_sum_system(
    x_map: &ActionMatrix,
    b_powers: &[ActionMatrix],
    tuple: &[u64],
    d: &MixedModulusVector,
) -> LinearSystemOverMixedModuli {
    let p = tuple.len();
    let order = b_powers.len() as u64;
    let moduli = d.moduli().to_vec();
    let mut blocks = vec![vec![None; p]; p + 1];
    for (i, row) in blocks.iter_mut().take(p).enumerate() {
        row[i] = Some(x_map.clone());
    }
    let mut s = 0u64;
    for l in 0..p {
        blocks[p][l] = Some(b_powers[(s % order) as usize].clone());
        s += tuple[l];
    }
    LinearSystemOverMixedModuli {
        blocks,
        unknown_moduli: vec![moduli; p],
        target: vec![d.clone(); p + 1],
    }
}

/// Converts `r_l = B^{s_l} y_l` back to `y_l`.
pub fn unshift(
    b_powers: &[ActionMatrix],
    tuple: &[u64],
    r: &[MixedModulusVector],
) -> Result<Vec<MixedModulusVector>> {
    let order = b_powers.len() as u64;
    let mut s = 0u64;
    let mut out = Vec::with_capacity(r.len());
    for (l, rl) in r.iter().enumerate() {
        let back = (order - s % order) % order;
        out.push(b_powers[back as usize].apply(rl)?);
        s += tuple[l];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_target_is_member_with_zero_witness() {
        let moduli = [25u64, 5, 5];
        let sys = LinearSystemOverMixedModuli {
            blocks: vec![vec![Some(ActionMatrix::identity(&moduli).scale(5))]],
            unknown_moduli: vec![moduli.to_vec()],
            target: vec![MixedModulusVector::zeros(&moduli)],
        };
        match linear_image_membership(&sys).unwrap() {
            Membership::Member { preimage } => assert!(sys.is_solution(&preimage).unwrap()),
            Membership::NonMember => panic!("zero is always in the image"),
        }
    }

    #[test]
    fn non_member_detected() {
        let sys = LinearSystemOverMixedModuli {
            blocks: vec![vec![Some(ActionMatrix::from_signed(1, 1, &[5], &[25]).unwrap())]],
            unknown_moduli: vec![vec![25]],
            target: vec![MixedModulusVector::new(&[1], &[25]).unwrap()],
        };
        assert_eq!(linear_image_membership(&sys).unwrap(), Membership::NonMember);
    }

    #[test]
    fn malformed_blocks_are_rejected() {
        let sys = LinearSystemOverMixedModuli {
            blocks: vec![vec![Some(ActionMatrix::identity(&[5, 5]))]],
            unknown_moduli: vec![vec![5]],
            target: vec![MixedModulusVector::zeros(&[5, 5])],
        };
        assert!(matches!(linear_image_membership(&sys), Err(FszError::Dimension(_))));
    }
}
