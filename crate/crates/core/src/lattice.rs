// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Integer lattice membership by row-style Hermite reduction.
//!
//! Generators are reduced to echelon form with unimodular row operations
//! while a transform matrix records each reduced row as a combination of the
//! original generators, so a solvable target yields explicit coefficients.

use num_integer::Integer;

/// Echelon basis of the lattice spanned by a list of generators.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    /// Reduced rows with their pivot column.
    rows: Vec<(usize, Vec<i128>)>,
    /// `transform[r]` expresses `rows[r]` in the original generators.
    transform: Vec<Vec<i128>>,
    generators: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

fn axpy(y: &[i128], a: i128, x: &[i128], b: i128) -> Result<Vec<i128>, Overflow> {
    // a*y + b*x
    y.iter()
        .zip(x)
        .map(|(&u, &v)| {
            let p = a.checked_mul(u).ok_or(Overflow)?;
            let q = b.checked_mul(v).ok_or(Overflow)?;
            p.checked_add(q).ok_or(Overflow)
        })
        .collect()
}

impl Lattice {
    pub fn new(dim: usize, gens: &[Vec<i128>]) -> Result<Lattice, Overflow> {
        let k = gens.len();
        let mut rows: Vec<Vec<i128>> = gens.to_vec();
        let mut tr: Vec<Vec<i128>> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                e
            })
            .collect();
        let mut done: Vec<(usize, Vec<i128>)> = Vec::new();
        let mut done_tr = Vec::new();
        for col in 0..dim {
            let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            let Some(&p) = live.first() else { continue };
            for &j in &live[1..] {
                let a = rows[p][col];
                let b = rows[j][col];
                let e = a.extended_gcd(&b);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let new_p = axpy(&rows[p], s, &rows[j], t)?;
                let new_j = axpy(&rows[p], b / g, &rows[j], -(a / g))?;
                let tp = axpy(&tr[p], s, &tr[j], t)?;
                let tj = axpy(&tr[p], b / g, &tr[j], -(a / g))?;
                rows[p] = new_p;
                rows[j] = new_j;
                tr[p] = tp;
                tr[j] = tj;
                debug_assert_eq!(rows[j][col], 0);
            }
            if rows[p][col] < 0 {
                rows[p].iter_mut().for_each(|v| *v = -*v);
                tr[p].iter_mut().for_each(|v| *v = -*v);
            }
            // keep the pivot row, drop it from the working set
            let row = rows.swap_remove(p);
            let t = tr.swap_remove(p);
            done.push((col, row));
            done_tr.push(t);
        }
        Ok(Lattice {
            dim,
            rows: done,
            transform: done_tr,
            generators: k,
        })
    }

    /// Coefficients `c` with `sum c_i * gens[i] == target`, if any.
    pub fn solve(&self, target: &[i128]) -> Result<Option<Vec<i128>>, Overflow> {
        assert_eq!(target.len(), self.dim);
        let mut residual = target.to_vec();
        let mut coef = vec![0i128; self.generators];
        let mut next = 0;
        for col in 0..self.dim {
            if next < self.rows.len() && self.rows[next].0 == col {
                let (_, row) = &self.rows[next];
                let piv = row[col];
                if residual[col] % piv != 0 {
                    return Ok(None);
                }
                let q = residual[col] / piv;
                residual = axpy(&residual, 1, row, -q)?;
                coef = axpy(&coef, 1, &self.transform[next], q)?;
                next += 1;
            } else if residual[col] != 0 {
                return Ok(None);
            }
        }
        Ok(Some(coef))
    }

    pub fn contains(&self, target: &[i128]) -> Result<bool, Overflow> {
        Ok(self.solve(target)?.is_some())
    }
}
