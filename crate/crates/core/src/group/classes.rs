use super::IndexedGroup;

/// Conjugacy classes over a dense index. Representatives are the least
/// element of each class and appear in ascending order.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    pub reps: Vec<u32>,
    /// Class number of every element.
    pub class_of: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl ConjugacyData {
    /// Orbits of conjugation by `gens`, which must generate the group.
    pub fn build(ix: &IndexedGroup, gens: &[u32]) -> Self {
        let n = ix.len();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let gens: Vec<(u32, u32)> = gens.iter().map(|&g| (g, ix.inv(g))).collect();
        let mut queue = Vec::new();
        for start in 0..n as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(start);
            class_of[start as usize] = id;
            queue.clear();
            queue.push(start);
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &(g, gi) in &gens {
                    let y = ix.mul(ix.mul(gi, x), g);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = id;
                        queue.push(y);
                    }
                }
            }
            sizes.push(queue.len() as u64);
        }
        ConjugacyData {
            reps,
            class_of,
            sizes,
        }
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn rep_of(&self, x: u32) -> u32 {
        self.reps[self.class_of[x as usize] as usize]
    }

    pub fn members(&self, class: u32) -> Vec<u32> {
        (0..self.class_of.len() as u32)
            .filter(|&x| self.class_of[x as usize] == class)
            .collect()
    }
}
