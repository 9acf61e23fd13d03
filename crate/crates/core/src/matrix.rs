//! Square matrices of polynomials: Jacobians and determinants.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::series::{MapTuple, Precision};
use crate::varset::VarSet;

/// Cofactor expansion is used up to this size, fraction-free elimination above.
pub const COFACTOR_MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    vars: VarSet,
    entries: Vec<SparsePoly>,
    precision: Precision,
}

impl PolyMatrix {
    /// Row-major entries.
    pub fn new(dim: usize, entries: Vec<SparsePoly>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::ArityMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let vars = entries[0].vars();
        if let Some(bad) = entries.iter().find(|e| e.vars() != vars) {
            return Err(Error::VarSetMismatch {
                left: vars,
                right: bad.vars(),
            });
        }
        Ok(PolyMatrix {
            dim,
            vars,
            entries,
            precision: Precision::Exact,
        })
    }

    pub fn identity(dim: usize, vars: VarSet) -> Self {
        let entries = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    SparsePoly::one(vars)
                } else {
                    SparsePoly::zero(vars)
                }
            })
            .collect();
        PolyMatrix {
            dim,
            vars,
            entries,
            precision: Precision::Exact,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.dim + j]
    }

    pub fn map(&self, f: impl FnMut(&SparsePoly) -> SparsePoly) -> PolyMatrix {
        PolyMatrix {
            dim: self.dim,
            vars: self.vars,
            entries: self.entries.iter().map(f).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.dim != other.dim {
            return Err(Error::ArityMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            dim: self.dim,
            vars: self.vars,
            entries,
            precision: self.precision.min(other.precision),
        })
    }

    pub fn trace(&self) -> SparsePoly {
        (0..self.dim).fold(SparsePoly::zero(self.vars), |acc, i| &acc + self.get(i, i))
    }

    /// Matrix product (entries multiplied exactly).
    pub fn matmul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = SparsePoly::zero(self.vars);
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        PolyMatrix {
            dim: n,
            vars: self.vars,
            entries,
            precision: self.precision.min(other.precision),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// `det`; cofactor expansion up to [`COFACTOR_MAX_DIM`], Bareiss above.
    /// With `trunc`, terms of z-degree above it are dropped.
    pub fn det(&self, trunc: Option<u32>) -> SparsePoly {
        if self.dim <= COFACTOR_MAX_DIM {
            self.det_cofactor(trunc)
        } else {
            let d = self.det_bareiss();
            match trunc {
                Some(t) => d.truncate(t),
                None => d,
            }
        }
    }

    pub fn det_cofactor(&self, trunc: Option<u32>) -> SparsePoly {
        let cols: Vec<usize> = (0..self.dim).collect();
        self.cofactor(0, &cols, trunc)
    }

    fn cofactor(&self, row: usize, cols: &[usize], trunc: Option<u32>) -> SparsePoly {
        if cols.len() == 1 {
            let e = self.get(row, cols[0]);
            return match trunc {
                Some(t) => e.truncate(t),
                None => e.clone(),
            };
        }
        let mut acc = SparsePoly::zero(self.vars);
        for (k, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.cofactor(row + 1, &rest, trunc);
            let term = e.mul(&minor, trunc).expect("shared layout");
            acc = if k % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }

    /// Fraction-free (Bareiss) elimination with exact polynomial division.
    pub fn det_bareiss(&self) -> SparsePoly {
        let n = self.dim;
        let mut m: Vec<Vec<SparsePoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = SparsePoly::one(self.vars);
        let mut negate = false;
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return SparsePoly::zero(self.vars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `(i, j) -> d h_i / d z_j`.
pub fn jacobian(h: &MapTuple) -> PolyMatrix {
    let n = h.n();
    let entries = (0..n * n)
        .map(|k| h.component(k / n).diff_z(k % n))
        .collect();
    let precision = match h.precision() {
        Precision::Exact => Precision::Exact,
        Precision::UpTo(d) => Precision::UpTo(d.saturating_sub(1)),
    };
    PolyMatrix {
        dim: n,
        vars: h.vars(),
        entries,
        precision,
    }
}

/// `det(d F_i / d z_j)` for `F = z - H`, modulo z-degree above `trunc`.
pub fn jacobian_det_of_z_minus(h: &MapTuple, trunc: Option<u32>) -> SparsePoly {
    let j = jacobian(h);
    PolyMatrix::identity(h.n(), h.vars())
        .sub(&j)
        .expect("same size")
        .det(trunc)
}
