//! The abelianization `Zⁿ / ⟨exponent vectors of relators⟩`, with canonical
//! coset representatives from an integer row-echelon basis.

use alloc::vec::Vec;

use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    generators: Vec<usize>,
    /// Echelon basis rows with the column of their positive pivot.
    basis: Vec<(usize, Vec<i64>)>,
}

impl Abelianization {
    pub fn new(alphabet: &Alphabet, relators: &[Word]) -> Self {
        let generators = alphabet.generators().to_vec();
        let n = generators.len();
        let mut rows: Vec<Vec<i64>> = relators
            .iter()
            .map(|r| {
                let sums = r.exponent_sums();
                generators.iter().map(|&g| sums[g]).collect()
            })
            .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0))
            .collect();
        let mut basis = Vec::new();
        let mut top = 0;
        for col in 0..n {
            while let Some(pivot) =
                (top..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].abs())
            {
                rows.swap(top, pivot);
                let mut done = true;
                for j in top + 1..rows.len() {
                    if rows[j][col] != 0 {
                        let q = rows[j][col] / rows[top][col];
                        let pivot_row = rows[top].clone();
                        for (x, p) in rows[j].iter_mut().zip(&pivot_row) {
                            *x -= q * p;
                        }
                        done &= rows[j][col] == 0;
                    }
                }
                if done {
                    if rows[top][col] < 0 {
                        rows[top].iter_mut().for_each(|x| *x = -*x);
                    }
                    basis.push((col, rows[top].clone()));
                    top += 1;
                    break;
                }
            }
        }
        Abelianization { generators, basis }
    }

    /// Canonical representative of the image of `w`.
    pub fn image(&self, w: &Word) -> Vec<i64> {
        let sums = w.exponent_sums();
        let mut v: Vec<i64> = self.generators.iter().map(|&g| sums[g]).collect();
        for (col, row) in &self.basis {
            let q = v[*col].div_euclid(row[*col]);
            if q != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
        v
    }
}
