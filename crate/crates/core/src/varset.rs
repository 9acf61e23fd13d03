//! Variable layouts. Variables are always ordered `(xi_1..xi_n, z_1..z_n, t)`
//! restricted to the blocks the layout carries.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    /// `z_1..z_n`
    Z,
    /// `xi_1..xi_n, z_1..z_n`
    XiZ,
    /// `z_1..z_n, t`
    ZT,
    /// `xi_1..xi_n, z_1..z_n, t`
    XiZT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSet {
    pub kind: VarKind,
    pub n: usize,
}

/// The role a single variable plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Xi(usize),
    Z(usize),
    T,
}

impl VarSet {
    pub const fn new(kind: VarKind, n: usize) -> Self {
        VarSet { kind, n }
    }
    pub const fn z(n: usize) -> Self {
        Self::new(VarKind::Z, n)
    }
    pub const fn xi_z(n: usize) -> Self {
        Self::new(VarKind::XiZ, n)
    }
    pub const fn z_t(n: usize) -> Self {
        Self::new(VarKind::ZT, n)
    }
    pub const fn xi_z_t(n: usize) -> Self {
        Self::new(VarKind::XiZT, n)
    }

    pub fn has_xi(&self) -> bool {
        matches!(self.kind, VarKind::XiZ | VarKind::XiZT)
    }
    pub fn has_t(&self) -> bool {
        matches!(self.kind, VarKind::ZT | VarKind::XiZT)
    }

    /// Total number of variables.
    pub fn len(&self) -> usize {
        let xi = if self.has_xi() { self.n } else { 0 };
        xi + self.n + usize::from(self.has_t())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn xi_range(&self) -> Range<usize> {
        if self.has_xi() {
            0..self.n
        } else {
            0..0
        }
    }

    pub fn z_range(&self) -> Range<usize> {
        let start = if self.has_xi() { self.n } else { 0 };
        start..start + self.n
    }

    /// Index of `xi_i` (0-based `i`).
    pub fn xi(&self, i: usize) -> Option<usize> {
        (self.has_xi() && i < self.n).then_some(i)
    }

    /// Index of `z_i` (0-based `i`).
    pub fn zi(&self, i: usize) -> Option<usize> {
        (i < self.n).then(|| self.z_range().start + i)
    }

    pub fn t(&self) -> Option<usize> {
        self.has_t().then(|| self.len() - 1)
    }

    pub fn role(&self, index: usize) -> Option<Var> {
        if index >= self.len() {
            return None;
        }
        if self.xi_range().contains(&index) {
            Some(Var::Xi(index))
        } else if self.z_range().contains(&index) {
            Some(Var::Z(index - self.z_range().start))
        } else {
            Some(Var::T)
        }
    }

    pub fn index_of(&self, var: Var) -> Option<usize> {
        match var {
            Var::Xi(i) => self.xi(i),
            Var::Z(i) => self.zi(i),
            Var::T => self.t(),
        }
    }

    pub fn var_name(&self, index: usize) -> String {
        match self.role(index) {
            Some(Var::Xi(i)) => format!("xi{}", i + 1),
            Some(Var::Z(i)) => format!("z{}", i + 1),
            Some(Var::T) => "t".to_string(),
            None => format!("?{index}"),
        }
    }

    /// The smallest layout holding both `self` and `other` (same `n`).
    pub fn join(&self, other: &VarSet) -> Option<VarSet> {
        if self.n != other.n {
            return None;
        }
        let xi = self.has_xi() || other.has_xi();
        let t = self.has_t() || other.has_t();
        let kind = match (xi, t) {
            (false, false) => VarKind::Z,
            (true, false) => VarKind::XiZ,
            (false, true) => VarKind::ZT,
            (true, true) => VarKind::XiZT,
        };
        Some(VarSet::new(kind, self.n))
    }

    pub fn with_xi(&self) -> VarSet {
        self.join(&VarSet::xi_z(self.n)).unwrap()
    }

    pub fn with_t(&self) -> VarSet {
        self.join(&VarSet::z_t(self.n)).unwrap()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::Z => "Z",
            VarKind::XiZ => "XiZ",
            VarKind::ZT => "ZT",
            VarKind::XiZT => "XiZT",
        };
        write!(f, "{k}({})", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts() {
        assert_eq!(VarSet::z(3).len(), 3);
        assert_eq!(VarSet::xi_z(3).len(), 6);
        assert_eq!(VarSet::z_t(3).len(), 4);
        assert_eq!(VarSet::xi_z_t(3).len(), 7);
    }

    #[test]
    fn layout_order() {
        let v = VarSet::xi_z_t(2);
        let names: Vec<_> = (0..v.len()).map(|i| v.var_name(i)).collect();
        assert_eq!(names, ["xi1", "xi2", "z1", "z2", "t"]);
        assert_eq!(v.zi(1), Some(3));
        assert_eq!(v.t(), Some(4));
        assert_eq!(VarSet::z(2).xi(0), None);
        assert_eq!(VarSet::z_t(2).role(2), Some(Var::T));
    }

    #[test]
    fn join_layouts() {
        assert_eq!(VarSet::z(2).join(&VarSet::z_t(2)), Some(VarSet::z_t(2)));
        assert_eq!(
            VarSet::xi_z(2).join(&VarSet::z_t(2)),
            Some(VarSet::xi_z_t(2))
        );
        assert_eq!(VarSet::z(2).join(&VarSet::z(3)), None);
    }
}
