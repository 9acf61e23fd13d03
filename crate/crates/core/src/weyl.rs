//! Differential operators with polynomial coefficients.
//!
//! An operator is stored in right-normal form `sum_a c_a(z) d^a`, which is
//! unique, as its right total symbol `sum_a c_a(z) xi^a` in the `XiZ(n)`
//! layout. Left-normal form `sum_b d^b b_b(z)` only ever appears as input to
//! [`normal_order`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{Eta, SparsePoly};
use crate::rational::{factorial, falling, Rational};
use crate::report::Check;
use crate::series::{Precision, SeriesTrunc};
use crate::varset::{VarKind, VarSet};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    symbol: SparsePoly,
}

impl DiffOp {
    /// Inverse of [`DiffOp::right_symbol`]: `xi^a` becomes `d^a` on the right.
    pub fn from_right_symbol(f: SparsePoly) -> Result<Self> {
        if f.vars().kind != VarKind::XiZ {
            return Err(Error::WrongVarSet {
                expected: "XiZ(n)",
                got: f.vars(),
            });
        }
        Ok(DiffOp { symbol: f })
    }

    pub fn zero(n: usize) -> Self {
        DiffOp {
            symbol: SparsePoly::zero(VarSet::xi_z(n)),
        }
    }

    pub fn identity(n: usize) -> Self {
        DiffOp {
            symbol: SparsePoly::one(VarSet::xi_z(n)),
        }
    }

    /// Multiplication by `a(z)`.
    pub fn multiplication(a: &SparsePoly) -> Result<Self> {
        if a.vars().kind != VarKind::Z {
            return Err(Error::WrongVarSet {
                expected: "Z(n)",
                got: a.vars(),
            });
        }
        Ok(DiffOp {
            symbol: a.embed(VarSet::xi_z(a.vars().n))?,
        })
    }

    /// `d/dz_i`, 0-based.
    pub fn partial(n: usize, i: usize) -> Self {
        DiffOp {
            symbol: SparsePoly::xi(VarSet::xi_z(n), i),
        }
    }

    pub fn n(&self) -> usize {
        self.symbol.vars().n
    }

    pub fn right_symbol(&self) -> &SparsePoly {
        &self.symbol
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// `a -> c_a(z)` in the z-only layout.
    pub fn coefficients(&self) -> BTreeMap<MultiIndex, SparsePoly> {
        let n = self.n();
        let vz = VarSet::z(n);
        let mut out: BTreeMap<MultiIndex, SparsePoly> = BTreeMap::new();
        for (m, c) in self.symbol.terms() {
            let alpha = MultiIndex::from_slice(&m.as_slice()[..n]);
            let beta = MultiIndex::from_slice(&m.as_slice()[n..]);
            let term = SparsePoly::monomial(vz, beta, c.clone());
            let e = out.entry(alpha).or_insert_with(|| SparsePoly::zero(vz));
            *e = &*e + &term;
        }
        out
    }

    /// Highest derivative order `max |a|`; 0 for the zero operator.
    pub fn max_order(&self) -> u32 {
        self.symbol.xi_degree().finite().unwrap_or(0)
    }

    /// `nu(z^b d^a) = |b| - |a|`, minimised over terms.
    pub fn nu(&self) -> Eta {
        self.symbol.eta().expect("symbol layout has xi")
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        Ok(DiffOp {
            symbol: self.symbol.add(&other.symbol)?,
        })
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        DiffOp {
            symbol: self.symbol.scale(c),
        }
    }
}

/// The right total symbol of `phi`.
pub fn right_symbol(phi: &DiffOp) -> SparsePoly {
    phi.symbol.clone()
}

pub fn from_right_symbol(f: SparsePoly) -> Result<DiffOp> {
    DiffOp::from_right_symbol(f)
}

/// Reads `f = sum_b b_b(z) xi^b` as the left-normal operator
/// `sum_b d^b b_b(z)` and returns its right-normal form, moving every
/// derivative past its coefficient with the Leibniz rule
/// `d^a z^b = sum_g binom(a, g) d^g(z^b) d^(a - g)`.
pub fn normal_order(f: &SparsePoly) -> Result<DiffOp> {
    let vars = f.vars();
    if vars.kind != VarKind::XiZ {
        return Err(Error::WrongVarSet {
            expected: "XiZ(n)",
            got: vars,
        });
    }
    let n = vars.n;
    let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (m, c) in f.terms() {
        let alpha = MultiIndex::from_slice(&m.as_slice()[..n]);
        let beta = MultiIndex::from_slice(&m.as_slice()[n..]);
        for gamma in alpha.sub_indices() {
            if !gamma.divides(&beta) {
                continue;
            }
            let mut k = alpha.binomial(&gamma);
            for i in 0..n {
                k *= falling(beta[i], gamma[i]);
            }
            let a_rest = alpha.checked_sub(&gamma).unwrap();
            let b_rest = beta.checked_sub(&gamma).unwrap();
            let mono = join(&a_rest, &b_rest);
            *acc.entry(mono).or_insert_with(Rational::zero) += c * Rational::from_integer(k);
        }
    }
    Ok(DiffOp {
        symbol: SparsePoly::from_terms(vars, acc)?,
    })
}

fn join(xi: &MultiIndex, z: &MultiIndex) -> MultiIndex {
    let mut v: Vec<u32> = xi.as_slice().to_vec();
    v.extend_from_slice(z.as_slice());
    MultiIndex::from_slice(&v)
}

/// Composition `phi . psi` in right-normal form.
pub fn op_mul(phi: &DiffOp, psi: &DiffOp) -> Result<DiffOp> {
    if phi.n() != psi.n() {
        return Err(Error::VarSetMismatch {
            left: phi.symbol.vars(),
            right: psi.symbol.vars(),
        });
    }
    let n = phi.n();
    let vars = phi.symbol.vars();
    let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (m1, c1) in phi.symbol.terms() {
        // c1 z^b1 d^a1
        let a1 = MultiIndex::from_slice(&m1.as_slice()[..n]);
        let b1 = MultiIndex::from_slice(&m1.as_slice()[n..]);
        let subs = a1.sub_indices();
        for (m2, c2) in psi.symbol.terms() {
            // c2 z^b2 d^a2
            let a2 = MultiIndex::from_slice(&m2.as_slice()[..n]);
            let b2 = MultiIndex::from_slice(&m2.as_slice()[n..]);
            let c = c1 * c2;
            for g in &subs {
                if !g.divides(&b2) {
                    continue;
                }
                let mut k = a1.binomial(g);
                for i in 0..n {
                    k *= falling(b2[i], g[i]);
                }
                let a = a1.checked_sub(g).unwrap().add(&a2);
                let b = b1.add(&b2.checked_sub(g).unwrap());
                *acc.entry(join(&a, &b)).or_insert_with(Rational::zero) +=
                    &c * Rational::from_integer(k);
            }
        }
    }
    Ok(DiffOp {
        symbol: SparsePoly::from_terms(vars, acc)?,
    })
}

/// `phi(u)` modulo z-degree above `d`. A truncated `u` must be known to
/// order `d + max_order(phi)`.
pub fn apply(phi: &DiffOp, u: &SeriesTrunc, d: u32) -> Result<SeriesTrunc> {
    let n = phi.n();
    if u.vars() != VarSet::z(n) {
        return Err(Error::WrongVarSet {
            expected: "Z(n) matching the operator",
            got: u.vars(),
        });
    }
    let need = d + phi.max_order();
    if let Precision::UpTo(k) = u.precision() {
        if k < need {
            return Err(Error::InsufficientTruncation {
                required: need,
                available: k,
            });
        }
    }
    let mut acc = SparsePoly::zero(VarSet::z(n));
    for (alpha, coeff) in phi.coefficients() {
        let du = u.poly().diff_z_multi(&alpha);
        acc = &acc + &coeff.mul(&du, Some(d))?;
    }
    Ok(SeriesTrunc::new(acc, d))
}

/// `tau(h(z) d^a) = (-1)^|a| d^a h(z)`, returned in right-normal form.
pub fn tau(phi: &DiffOp) -> DiffOp {
    let xr = phi.symbol.vars().xi_range();
    let left = phi.symbol.map_coeffs(|m, c| {
        if m.degree_in(xr.clone()) % 2 == 1 {
            -c
        } else {
            c.clone()
        }
    });
    normal_order(&left).expect("XiZ layout")
}

/// `Lambda = sum_i d/dxi_i d/dz_i`, applied once. Works on `XiZ` and `XiZT`
/// layouts; `t` is a passive parameter.
pub fn lambda(f: &SparsePoly) -> Result<SparsePoly> {
    lambda_window(f, None)
}

/// One application of `Lambda`, dropping output terms of z-degree above `zmax`.
pub fn lambda_window(f: &SparsePoly, zmax: Option<u32>) -> Result<SparsePoly> {
    let vars = f.vars();
    if !vars.has_xi() {
        return Err(Error::WrongVarSet {
            expected: "XiZ or XiZT",
            got: vars,
        });
    }
    let n = vars.n;
    let zr = vars.z_range();
    let mut acc: std::collections::HashMap<MultiIndex, Rational> =
        std::collections::HashMap::with_capacity(f.len() * n);
    for (m, c) in f.terms() {
        if let Some(d) = zmax {
            // output z-degree is one less than the input's
            if m.degree_in(zr.clone()) > d + 1 {
                continue;
            }
        }
        for i in 0..n {
            let (xi, zi) = (i, zr.start + i);
            let (a, b) = (m[xi], m[zi]);
            if a == 0 || b == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(xi, a - 1);
            m2.set(zi, b - 1);
            let k = Rational::from_integer(((a as u64) * (b as u64)).into());
            *acc.entry(m2).or_insert_with(Rational::zero) += c * k;
        }
    }
    SparsePoly::from_terms(vars, acc)
}

/// `Lambda^m f`, exact.
pub fn lambda_pow(f: &SparsePoly, m: u32) -> Result<SparsePoly> {
    let mut acc = f.clone();
    for _ in 0..m {
        if acc.is_zero() {
            break;
        }
        acc = lambda(&acc)?;
    }
    if m == 0 && !f.vars().has_xi() {
        return Err(Error::WrongVarSet {
            expected: "XiZ or XiZT",
            got: f.vars(),
        });
    }
    Ok(acc)
}

/// `Phi(f) = sum_m Lambda^m f / m!` for a polynomial `f`; the sum stops at
/// the first vanishing power, which always exists.
pub fn phi_exact(f: &SparsePoly) -> Result<SparsePoly> {
    let mut acc = f.clone();
    let mut cur = f.clone();
    let mut m = 0u32;
    loop {
        cur = lambda(&cur)?;
        if cur.is_zero() {
            return Ok(acc);
        }
        m += 1;
        let w = Rational::new(One::one(), factorial(m));
        acc = &acc + &cur.scale(&w);
    }
}

/// A series in `(xi, z)` known on the window needed by `exp(Lambda)`.
///
/// The xi-degree-`j` slice must have z-order at least `2j` (true for
/// anything built from `<xi, H>` with `o(H) >= 2`) and must be known up to
/// z-degree `d + j`. Then `Phi` of the series is exact on the output window
/// xi-degree `<= d`, z-degree `<= d`, and slices with `j > d` never reach
/// the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfiledSeries {
    poly: SparsePoly,
    z_bound: u32,
}

impl ProfiledSeries {
    /// Validates the order profile and trims `poly` to the slices and
    /// degrees that matter for the z bound `d`.
    pub fn new(poly: SparsePoly, d: u32) -> Result<Self> {
        let vars = poly.vars();
        if vars.kind != VarKind::XiZ {
            return Err(Error::WrongVarSet {
                expected: "XiZ(n)",
                got: vars,
            });
        }
        let xr = vars.xi_range();
        let zr = vars.z_range();
        for (m, _) in poly.terms() {
            let j = m.degree_in(xr.clone());
            let zo = m.degree_in(zr.clone());
            if zo < 2 * j {
                return Err(Error::MissingOrderProfile {
                    xi_degree: j,
                    z_order: zo,
                    required: 2 * j,
                });
            }
        }
        let poly = poly.filter_terms(|m| {
            let j = m.degree_in(xr.clone());
            j <= d && m.degree_in(zr.clone()) <= d + j
        });
        Ok(ProfiledSeries { poly, z_bound: d })
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn z_bound(&self) -> u32 {
        self.z_bound
    }
}

/// Input to [`phi_apply`].
#[derive(Debug, Clone)]
pub enum PhiInput {
    Exact(SparsePoly),
    Profiled(ProfiledSeries),
}

/// `Phi(f)` restricted to xi-degree `<= k` and z-degree `<= d`.
///
/// For profiled input the effective xi bound is `min(k, z_bound)` and `d`
/// must not exceed the profile's z bound.
pub fn phi_apply(input: &PhiInput, k: u32, d: u32) -> Result<SparsePoly> {
    let (full, k) = match input {
        PhiInput::Exact(f) => (phi_exact(f)?, k),
        PhiInput::Profiled(s) => {
            if d > s.z_bound {
                return Err(Error::InsufficientTruncation {
                    required: d,
                    available: s.z_bound,
                });
            }
            let mut acc = s.poly.clone();
            let mut cur = s.poly.clone();
            for m in 1..=d {
                cur = lambda(&cur)?;
                if cur.is_zero() {
                    break;
                }
                acc = &acc + &cur.scale(&Rational::new(One::one(), factorial(m)));
            }
            (acc, k.min(s.z_bound))
        }
    };
    let vars = full.vars();
    let (xr, zr) = (vars.xi_range(), vars.z_range());
    Ok(full.filter_terms(|m| m.degree_in(xr.clone()) <= k && m.degree_in(zr.clone()) <= d))
}

/// Checks `Phi(f) = R(L^-1(f))` by computing both sides independently:
/// the left through powers of `Lambda`, the right through Leibniz reordering.
pub fn verify_phi_is_rl_inv(f: &SparsePoly) -> Result<Check> {
    let via_leibniz = normal_order(f)?.symbol;
    let via_exp = phi_exact(f)?;
    Ok(Check::equal("phi = R o L^-1", &via_exp, &via_leibniz))
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbol.is_zero() {
            return f.write_str("0");
        }
        let n = self.n();
        for (k, (m, c)) in self.symbol.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            for i in 0..n {
                match m[n + i] {
                    0 => {}
                    1 => parts.push(format!("z{}", i + 1)),
                    e => parts.push(format!("z{}^{e}", i + 1)),
                }
            }
            for i in 0..n {
                match m[i] {
                    0 => {}
                    1 => parts.push(format!("d{}", i + 1)),
                    e => parts.push(format!("d{}^{e}", i + 1)),
                }
            }
            if parts.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&parts.join("*"))?;
            } else {
                write!(f, "{mag}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rational::int;

    fn sym(s: &str, n: usize) -> SparsePoly {
        parse_poly(s, VarSet::xi_z(n)).unwrap()
    }

    fn op(s: &str, n: usize) -> DiffOp {
        DiffOp::from_right_symbol(sym(s, n)).unwrap()
    }

    #[test]
    fn right_symbols() {
        let euler = op_mul(
            &DiffOp::multiplication(&parse_poly("z1", VarSet::z(1)).unwrap()).unwrap(),
            &DiffOp::partial(1, 0),
        )
        .unwrap();
        assert_eq!(right_symbol(&euler), sym("xi1*z1", 1));
        assert_eq!(right_symbol(&DiffOp::identity(1)), sym("1", 1));
        let d2 = op_mul(&DiffOp::partial(1, 0), &DiffOp::partial(1, 0)).unwrap();
        assert_eq!(right_symbol(&d2), sym("xi1^2", 1));
        assert!(DiffOp::from_right_symbol(parse_poly("z1", VarSet::z(1)).unwrap()).is_err());
    }

    #[test]
    fn leibniz_normal_ordering() {
        assert_eq!(
            normal_order(&sym("xi1*z1", 1)).unwrap(),
            op("xi1*z1 + 1", 1)
        );
        assert_eq!(
            normal_order(&sym("xi1^2*z1", 1)).unwrap(),
            op("xi1^2*z1 + 2*xi1", 1)
        );
        assert_eq!(
            normal_order(&sym("z1^3 - z2", 2)).unwrap(),
            op("z1^3 - z2", 2)
        );
    }

    #[test]
    fn composition() {
        let d1 = DiffOp::partial(1, 0);
        let z1 = DiffOp::multiplication(&parse_poly("z1", VarSet::z(1)).unwrap()).unwrap();
        assert_eq!(op_mul(&d1, &z1).unwrap().to_string(), "z1*d1 + 1");
        assert_eq!(op_mul(&z1, &d1).unwrap().to_string(), "z1*d1");
        let e = op("xi1*z1", 1);
        assert_eq!(op_mul(&e, &e).unwrap().to_string(), "z1^2*d1^2 + z1*d1");
    }

    #[test]
    fn application() {
        let e = op("xi1*z1", 1);
        let u = SeriesTrunc::exact(parse_poly("z1^3", VarSet::z(1)).unwrap());
        assert_eq!(apply(&e, &u, 5).unwrap().poly().to_string(), "3*z1^3");
        let dz = normal_order(&sym("xi1*z1", 1)).unwrap();
        let one = SeriesTrunc::exact(SparsePoly::one(VarSet::z(1)));
        assert_eq!(apply(&dz, &one, 3).unwrap().poly().to_string(), "1");
        let short = SeriesTrunc::new(parse_poly("z1^2", VarSet::z(1)).unwrap(), 3);
        assert_eq!(
            apply(&op("xi1^2", 1), &short, 2),
            Err(Error::InsufficientTruncation {
                required: 4,
                available: 3
            })
        );
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&op("xi1*z1", 1)), op("-xi1*z1 - 1", 1));
        assert_eq!(tau(&op("z1^2 + 3*z2", 2)), op("z1^2 + 3*z2", 2));
        assert_eq!(tau(&op("xi1", 1)), op("-xi1", 1));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda(&sym("xi1*z1", 1)).unwrap(), sym("1", 1));
        assert!(lambda(&sym("xi1*z2^2", 2)).unwrap().is_zero());
        assert!(lambda(&parse_poly("z1", VarSet::z(1)).unwrap()).is_err());
        assert_eq!(
            lambda_pow(&sym("xi1^2*z1^4", 1), 2).unwrap(),
            sym("24*z1^2", 1)
        );
    }

    #[test]
    fn phi_examples() {
        let f = sym("xi1*z1", 1);
        assert_eq!(
            phi_apply(&PhiInput::Exact(f), 5, 5).unwrap(),
            sym("xi1*z1 + 1", 1)
        );
        let c = sym("7/3", 2);
        assert_eq!(phi_apply(&PhiInput::Exact(c.clone()), 2, 2).unwrap(), c);
    }

    #[test]
    fn phi_equals_reordering() {
        for (f, both) in [
            ("xi1*z1", "xi1*z1 + 1"),
            ("xi1^2*z1^2", "xi1^2*z1^2 + 4*xi1*z1 + 2"),
            ("5", "5"),
        ] {
            let r = verify_phi_is_rl_inv(&sym(f, 1)).unwrap();
            assert!(r.pass, "{f}");
            assert_eq!(phi_exact(&sym(f, 1)).unwrap(), sym(both, 1));
        }
    }

    #[test]
    fn profile_is_enforced() {
        let bad = sym("xi1*z1", 1);
        assert!(matches!(
            ProfiledSeries::new(bad, 3),
            Err(Error::MissingOrderProfile {
                xi_degree: 1,
                z_order: 1,
                required: 2
            })
        ));
        let ok = ProfiledSeries::new(sym("1 + xi1*z1^2 + xi1*z1^9 + xi1^5*z1^10", 1), 3).unwrap();
        assert_eq!(ok.poly(), &sym("1 + xi1*z1^2", 1));
    }

    #[test]
    fn nu_grading() {
        assert_eq!(op("xi1^2*z1", 1).nu(), Eta::Finite(-1));
        assert_eq!(op("xi1*z1^3", 1).scale(&int(2)).nu(), Eta::Finite(2));
    }
}
