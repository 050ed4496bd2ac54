//! Linear combinations of vectors, and expressions that are affine in
//! function values and linear in Gram entries `<u, v>`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::scalar::Scalar;

/// Vectors of one iteration, with `x*` at the origin.
///
/// `Xk1` (`x_{k+1} - x*`) and `Ss` (`s*`) are raw symbols; [`substitute`]
/// eliminates them through `x_{k+1} = x_k - gamma (g_k + s_{k+1})` and
/// `s* = -g*`.
///
/// [`substitute`]: SymbolicExpr::substitute
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VectorSymbol {
    /// `x_k - x*`
    X,
    Xk1,
    Gk,
    Gk1,
    Gs,
    Sk,
    Sk1,
    Ss,
}

impl VectorSymbol {
    pub const CANONICAL: [VectorSymbol; 6] = [
        VectorSymbol::X,
        VectorSymbol::Gk,
        VectorSymbol::Gk1,
        VectorSymbol::Gs,
        VectorSymbol::Sk,
        VectorSymbol::Sk1,
    ];

    pub fn is_canonical(self) -> bool {
        !matches!(self, VectorSymbol::Xk1 | VectorSymbol::Ss)
    }

    pub fn name(self) -> &'static str {
        match self {
            VectorSymbol::X => "x_k-x*",
            VectorSymbol::Xk1 => "x_k1-x*",
            VectorSymbol::Gk => "g_k",
            VectorSymbol::Gk1 => "g_k1",
            VectorSymbol::Gs => "g*",
            VectorSymbol::Sk => "s_k",
            VectorSymbol::Sk1 => "s_k1",
            VectorSymbol::Ss => "s*",
        }
    }
}

/// Affine symbols: the constant and the function values of `f` and `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScalarSymbol {
    One,
    Fk,
    Fk1,
    Fs,
    Hk,
    Hk1,
    Hs,
}

impl ScalarSymbol {
    pub fn name(self) -> &'static str {
        match self {
            ScalarSymbol::One => "1",
            ScalarSymbol::Fk => "f_k",
            ScalarSymbol::Fk1 => "f_k1",
            ScalarSymbol::Fs => "f*",
            ScalarSymbol::Hk => "h_k",
            ScalarSymbol::Hk1 => "h_k1",
            ScalarSymbol::Hs => "h*",
        }
    }
}

/// `sum_i c_i v_i`, zero coefficients dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct LinComb<F> {
    terms: BTreeMap<VectorSymbol, F>,
}

impl<F: Field> Default for LinComb<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> LinComb<F> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn var(v: VectorSymbol) -> Self {
        Self::zero().plus(v, F::one())
    }

    /// `self + c v`
    pub fn plus(mut self, v: VectorSymbol, c: F) -> Self {
        let updated = self.terms.remove(&v).map_or(c.clone(), |old| old + c);
        if !updated.is_zero() {
            self.terms.insert(v, updated);
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        other
            .terms
            .iter()
            .fold(self.clone(), |acc, (v, c)| acc.plus(*v, c.clone()))
    }

    pub fn scale(&self, s: &F) -> Self {
        self.terms
            .iter()
            .fold(Self::zero(), |acc, (v, c)| acc.plus(*v, s.clone() * c.clone()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VectorSymbol, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn substitute(&self, gamma: &F) -> Self {
        self.terms.iter().fold(Self::zero(), |acc, (v, c)| {
            acc.add(&substitution(*v, gamma).scale(c))
        })
    }
}

impl<F: Field> fmt::Display for LinComb<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, c)| format!("({c})*{}", v.name()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical replacement of a raw symbol.
fn substitution<F: Field>(v: VectorSymbol, gamma: &F) -> LinComb<F> {
    match v {
        VectorSymbol::Xk1 => LinComb::var(VectorSymbol::X)
            .plus(VectorSymbol::Gk, -gamma.clone())
            .plus(VectorSymbol::Sk1, -gamma.clone()),
        VectorSymbol::Ss => LinComb::zero().plus(VectorSymbol::Gs, -F::one()),
        other => LinComb::var(other),
    }
}

/// Unordered pair key.
fn pair(a: VectorSymbol, b: VectorSymbol) -> (VectorSymbol, VectorSymbol) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `sum c_s s + sum c_uv <u, v>`
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicExpr<F> {
    scalars: BTreeMap<ScalarSymbol, F>,
    gram: BTreeMap<(VectorSymbol, VectorSymbol), F>,
}

impl<F: Field> Default for SymbolicExpr<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> SymbolicExpr<F> {
    pub fn zero() -> Self {
        Self {
            scalars: BTreeMap::new(),
            gram: BTreeMap::new(),
        }
    }

    pub fn scalar(s: ScalarSymbol, c: F) -> Self {
        let mut e = Self::zero();
        e.add_scalar(s, c);
        e
    }

    /// `<a, b>`
    pub fn inner(a: &LinComb<F>, b: &LinComb<F>) -> Self {
        let mut e = Self::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                e.add_gram(*u, *v, cu.clone() * cv.clone());
            }
        }
        e
    }

    pub fn norm_sq(a: &LinComb<F>) -> Self {
        Self::inner(a, a)
    }

    fn add_scalar(&mut self, s: ScalarSymbol, c: F) {
        let updated = self.scalars.remove(&s).map_or(c.clone(), |old| old + c);
        if !updated.is_zero() {
            self.scalars.insert(s, updated);
        }
    }

    fn add_gram(&mut self, u: VectorSymbol, v: VectorSymbol, c: F) {
        let key = pair(u, v);
        let updated = self.gram.remove(&key).map_or(c.clone(), |old| old + c);
        if !updated.is_zero() {
            self.gram.insert(key, updated);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (s, c) in &other.scalars {
            e.add_scalar(*s, c.clone());
        }
        for ((u, v), c) in &other.gram {
            e.add_gram(*u, *v, c.clone());
        }
        e
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut e = Self::zero();
        for (k, c) in &self.scalars {
            e.add_scalar(*k, s.clone() * c.clone());
        }
        for ((u, v), c) in &self.gram {
            e.add_gram(*u, *v, s.clone() * c.clone());
        }
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.scalars.is_empty() && self.gram.is_empty()
    }

    pub fn scalar_coeff(&self, s: ScalarSymbol) -> F {
        self.scalars.get(&s).cloned().unwrap_or_else(F::zero)
    }

    /// Coefficient of `<u, v>` (order irrelevant).
    pub fn gram_coeff(&self, u: VectorSymbol, v: VectorSymbol) -> F {
        self.gram.get(&pair(u, v)).cloned().unwrap_or_else(F::zero)
    }

    pub fn scalar_terms(&self) -> impl Iterator<Item = (&ScalarSymbol, &F)> {
        self.scalars.iter()
    }

    pub fn gram_terms(&self) -> impl Iterator<Item = (&(VectorSymbol, VectorSymbol), &F)> {
        self.gram.iter()
    }

    pub fn is_canonical(&self) -> bool {
        self.gram.keys().all(|(u, v)| u.is_canonical() && v.is_canonical())
    }

    /// Eliminates `x_{k+1}` and `s*`.
    pub fn substitute(&self, gamma: &F) -> Self {
        let mut e = Self::zero();
        for (s, c) in &self.scalars {
            e.add_scalar(*s, c.clone());
        }
        for ((u, v), c) in &self.gram {
            let term = Self::inner(&substitution(*u, gamma), &substitution(*v, gamma));
            e = e.add(&term.scale(c));
        }
        e
    }

    /// Nonzero coefficients as `(term, coefficient)` strings.
    pub fn describe_terms(&self) -> Vec<(String, String)> {
        let scalars = self
            .scalars
            .iter()
            .map(|(s, c)| (s.name().to_string(), c.to_string()));
        let gram = self
            .gram
            .iter()
            .map(|((u, v), c)| (format!("<{}, {}>", u.name(), v.name()), c.to_string()));
        scalars.chain(gram).collect()
    }
}

/// Float values for every symbol an expression may contain.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub vectors: BTreeMap<VectorSymbol, Vec<f64>>,
    pub scalars: BTreeMap<ScalarSymbol, f64>,
}

impl SymbolicExpr<BigRational> {
    /// Floating-point value under `a`. Missing symbols count as zero.
    pub fn evaluate(&self, a: &Assignment) -> f64 {
        let scalar_part: f64 = self
            .scalars
            .iter()
            .map(|(s, c)| {
                let v = if *s == ScalarSymbol::One {
                    1.0
                } else {
                    a.scalars.get(s).copied().unwrap_or(0.0)
                };
                c.to_f64() * v
            })
            .sum();
        let gram_part: f64 = self
            .gram
            .iter()
            .map(|((u, v), c)| {
                let ip = match (a.vectors.get(u), a.vectors.get(v)) {
                    (Some(x), Some(y)) => crate::linalg::dot(x, y),
                    _ => 0.0,
                };
                c.to_f64() * ip
            })
            .sum();
        scalar_part + gram_part
    }

    /// Sum of absolute coefficients, a scale for float comparisons.
    pub fn coefficient_mass(&self) -> f64 {
        self.scalars
            .values()
            .chain(self.gram.values())
            .map(|c| c.to_f64().abs())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    use VectorSymbol::*;

    #[test]
    fn inner_products_are_symmetric() {
        let a = LinComb::var(Gk).plus(X, q(2, 1));
        let b = LinComb::var(X).plus(Gs, q(-1, 1));
        assert_eq!(SymbolicExpr::inner(&a, &b), SymbolicExpr::inner(&b, &a));
        let n = SymbolicExpr::norm_sq(&a);
        assert_eq!(n.gram_coeff(X, Gk), q(4, 1));
        assert_eq!(n.gram_coeff(Gk, X), q(4, 1));
        assert_eq!(n.gram_coeff(X, X), q(4, 1));
    }

    #[test]
    fn substitution_eliminates_raw_symbols() {
        let gamma = q(1, 2);
        let e = SymbolicExpr::norm_sq(&LinComb::var(Xk1)).add(&SymbolicExpr::inner(
            &LinComb::var(Ss),
            &LinComb::var(X),
        ));
        assert!(!e.is_canonical());
        let s = e.substitute(&gamma);
        assert!(s.is_canonical());
        // |X - (Gk + Sk1)/2|^2 - <Gs, X>
        assert_eq!(s.gram_coeff(X, X), q(1, 1));
        assert_eq!(s.gram_coeff(X, Gk), q(-1, 1));
        assert_eq!(s.gram_coeff(Gk, Sk1), q(1, 2));
        assert_eq!(s.gram_coeff(Gs, X), q(-1, 1));
        assert_eq!(s.substitute(&gamma), s);
    }

    #[test]
    fn evaluation() {
        let mut a = Assignment::default();
        a.vectors.insert(Gk, vec![1.0, 2.0, 2.0]);
        let e: SymbolicExpr<Q> = SymbolicExpr::norm_sq(&LinComb::var(Gk));
        assert_eq!(e.evaluate(&a), 9.0);
        assert_eq!(SymbolicExpr::<Q>::zero().evaluate(&a), 0.0);
        let s = SymbolicExpr::scalar(ScalarSymbol::One, q(3, 2));
        assert_eq!(s.evaluate(&a), 1.5);
    }

    fn arb_symbol() -> impl Strategy<Value = VectorSymbol> {
        prop::sample::select(vec![X, Xk1, Gk, Gk1, Gs, Sk, Sk1, Ss])
    }

    fn arb_rational() -> impl Strategy<Value = Q> {
        (-20i64..20, 1i64..10).prop_map(|(n, d)| q(n, d))
    }

    fn arb_lincomb() -> impl Strategy<Value = LinComb<Q>> {
        prop::collection::vec((arb_symbol(), arb_rational()), 0..4)
            .prop_map(|ts| ts.into_iter().fold(LinComb::zero(), |acc, (v, c)| acc.plus(v, c)))
    }

    fn arb_expr() -> impl Strategy<Value = SymbolicExpr<Q>> {
        (
            prop::collection::vec((arb_lincomb(), arb_lincomb(), arb_rational()), 0..3),
            prop::collection::vec((prop::sample::select(vec![ScalarSymbol::Fk, ScalarSymbol::Hs, ScalarSymbol::One]), arb_rational()), 0..3),
        )
            .prop_map(|(grams, scalars)| {
                let mut e = SymbolicExpr::zero();
                for (a, b, c) in grams {
                    e = e.add(&SymbolicExpr::inner(&a, &b).scale(&c));
                }
                for (s, c) in scalars {
                    e = e.add(&SymbolicExpr::scalar(s, c));
                }
                e
            })
    }

    proptest! {
        #[test]
        fn algebra_laws(a in arb_expr(), b in arb_expr(), c in arb_expr(), s in arb_rational(), t in arb_rational()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&b).scale(&s), a.scale(&s).add(&b.scale(&s)));
            prop_assert_eq!(a.scale(&(s.clone() + t.clone())), a.scale(&s).add(&a.scale(&t)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn substitution_is_linear_and_idempotent(a in arb_expr(), b in arb_expr(), s in arb_rational(), g in arb_rational()) {
            let lhs = a.scale(&s).add(&b).substitute(&g);
            let rhs = a.substitute(&g).scale(&s).add(&b.substitute(&g));
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(lhs.is_canonical());
            prop_assert_eq!(lhs.substitute(&g), lhs);
        }
    }
}
