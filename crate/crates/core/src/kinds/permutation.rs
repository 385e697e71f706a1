use std::any::Any;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{enumeration_budget, GroupImpl, GroupKind};

/// A permutation group on `0..degree`; keys are image lists.
///
/// Products compose left to right: `(a b)(x) = b(a(x))`.
pub struct PermutationGroup {
    degree: usize,
    gens: Vec<ElementKey>,
    elements: Arc<Vec<ElementKey>>,
    set: FxHashSet<ElementKey>,
}

fn compose(a: &[u32], b: &[u32], out: &mut [u32]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = b[x as usize];
    }
}

impl PermutationGroup {
    /// Closes the given image lists under composition, within the enumeration budget.
    pub fn new(degree: usize, gens: Vec<ElementKey>) -> Result<Self> {
        Self::with_budget(degree, gens, enumeration_budget())
    }

    pub fn with_budget(degree: usize, gens: Vec<ElementKey>, budget: u64) -> Result<Self> {
        if degree == 0 {
            return Err(FszError::domain("permutation degree must be positive"));
        }
        for g in &gens {
            check_permutation(degree, g.coords())?;
        }
        let id = ElementKey::new(0..degree as u32);
        let mut set = FxHashSet::default();
        set.insert(id.clone());
        let mut queue = vec![id];
        let mut head = 0;
        let mut buf = vec![0u32; degree];
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &gens {
                compose(x.coords(), g.coords(), &mut buf);
                let y = ElementKey::from_slice(&buf);
                if !set.contains(&y) {
                    if set.len() as u64 >= budget {
                        return Err(FszError::capacity(
                            "permutation group closure",
                            format!("more than {budget}"),
                            budget,
                        ));
                    }
                    set.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        queue.sort();
        Ok(PermutationGroup {
            degree,
            gens,
            elements: Arc::new(queue),
            set,
        })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (degree, gens) = parse_permutations(text)?;
        Self::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

fn check_permutation(degree: usize, images: &[u32]) -> Result<()> {
    if images.len() != degree {
        return Err(FszError::structural(format!(
            "permutation has {} images, degree is {degree}",
            images.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in images {
        if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
            return Err(FszError::structural("image list is not a permutation"));
        }
    }
    Ok(())
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> FszError {
    FszError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the `deg N` header followed by one generator per line in
/// disjoint cycle notation with 1-based points. `#` starts a comment.
pub fn parse_permutations(text: &str) -> Result<(usize, Vec<ElementKey>)> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line_no = lno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(deg) = degree else {
            let trimmed = content.trim_start();
            let col = content.len() - trimmed.len() + 1;
            let rest = trimmed
                .strip_prefix("deg")
                .ok_or_else(|| parse_error(line_no, col, "expected `deg N` header"))?;
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_error(line_no, col + 3, "degree is not a positive integer"))?;
            if n == 0 {
                return Err(parse_error(line_no, col + 3, "degree must be positive"));
            }
            degree = Some(n);
            continue;
        };
        gens.push(parse_cycles(content, deg, line_no)?);
    }
    let degree = degree.ok_or_else(|| parse_error(1, 1, "missing `deg N` header"))?;
    Ok((degree, gens))
}

fn parse_cycles(line: &str, degree: usize, line_no: usize) -> Result<ElementKey> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut used = vec![false; degree];
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    let col = |i: usize| chars.get(i).map_or(line.len(), |c| c.0) + 1;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].1.is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        if chars[i].1 != '(' {
            return Err(parse_error(line_no, col(i), format!("expected `(`, found `{}`", chars[i].1)));
        }
        i += 1;
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            skip_ws(&mut i);
            if i < chars.len() && chars[i].1 == ')' && cycle.is_empty() {
                i += 1;
                break;
            }
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(parse_error(line_no, col(i), "expected a point"));
            }
            let text: String = chars[start..i].iter().map(|c| c.1).collect();
            let point: usize = text
                .parse()
                .map_err(|_| parse_error(line_no, col(start), "point out of range"))?;
            if point == 0 || point > degree {
                return Err(parse_error(
                    line_no,
                    col(start),
                    format!("point {point} is outside 1..={degree}"),
                ));
            }
            if std::mem::replace(&mut used[point - 1], true) {
                return Err(parse_error(
                    line_no,
                    col(start),
                    format!("point {point} appears twice"),
                ));
            }
            cycle.push(point - 1);
            skip_ws(&mut i);
            match chars.get(i).map(|c| c.1) {
                Some(',') => i += 1,
                Some(')') => {
                    i += 1;
                    break;
                }
                _ => return Err(parse_error(line_no, col(i), "expected `,` or `)`")),
            }
        }
        for (k, &x) in cycle.iter().enumerate() {
            images[x] = cycle[(k + 1) % cycle.len()] as u32;
        }
    }
    Ok(ElementKey::new(images))
}

impl GroupImpl for PermutationGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::Permutation
    }

    fn descriptor(&self) -> String {
        format!(
            "perm(deg {}, {} generators, order {})",
            self.degree,
            self.gens.len(),
            self.elements.len()
        )
    }

    fn key_len(&self) -> usize {
        self.degree
    }

    fn identity(&self) -> ElementKey {
        ElementKey::new(0..self.degree as u32)
    }

    fn generators(&self) -> Vec<ElementKey> {
        self.gens.clone()
    }

    fn generator_names(&self) -> Vec<String> {
        (1..=self.gens.len()).map(|i| format!("g{i}")).collect()
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        check_permutation(self.degree, a)?;
        if !self.set.contains(&ElementKey::from_slice(a)) {
            return Err(FszError::structural("permutation is not in the group"));
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        compose(a, b, out);
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        for (x, &y) in a.iter().enumerate() {
            out[y as usize] = x as u32;
        }
    }

    fn order(&self) -> u128 {
        self.elements.len() as u128
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some(Ok(self.elements.as_ref().clone()))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
