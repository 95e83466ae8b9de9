//! Monomials and polynomial elements of a free graded-commutative algebra.
//!
//! A monomial is an exponent vector over the generator list of a model;
//! odd-degree generators admit exponents 0 or 1 only. Products carry the
//! Koszul sign: swapping two odd factors flips the sign, and the square of an
//! odd generator is zero.

use crate::rational::Scalar;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 != 0
    }
}

/// Exponent vector aligned with a model's generator list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(num_generators: usize) -> Self {
        Monomial {
            exps: vec![0; num_generators],
        }
    }

    pub fn generator(num_generators: usize, index: usize) -> Self {
        let mut exps = vec![0; num_generators];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, gens: &[Generator]) -> i64 {
        self.exps
            .iter()
            .zip(gens)
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    /// Total exponent sum.
    pub fn word_length(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Product with the Koszul sign. `None` when an odd generator would be
    /// squared. The boolean is true when the sign is negative.
    pub fn mul(&self, other: &Monomial, gens: &[Generator]) -> Option<(bool, Monomial)> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for ((&a, &b), g) in self.exps.iter().zip(&other.exps).zip(gens) {
            let e = a + b;
            if g.is_odd() && e > 1 {
                return None;
            }
            exps.push(e);
        }
        // Moving each odd factor of `other` left past the later odd factors
        // of `self` contributes one transposition per pair.
        let mut swaps: u64 = 0;
        let mut later_odds_in_self: u64 = 0;
        for i in (0..self.exps.len()).rev() {
            if gens[i].is_odd() && other.exps[i] == 1 {
                swaps += later_odds_in_self;
            }
            if gens[i].is_odd() && self.exps[i] == 1 {
                later_odds_in_self += 1;
            }
        }
        Some((swaps % 2 == 1, Monomial { exps }))
    }

    pub fn label(&self, gens: &[Generator]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", gens[i].name, e)),
            }
        }
        parts.join(" ")
    }
}

/// Sparse polynomial: monomial → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl PolyElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(num_generators: usize) -> Self {
        Self::from_term(Monomial::one(num_generators), Scalar::from_integer(1.into()))
    }

    pub fn from_term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(num_generators: usize, index: usize) -> Self {
        Self::from_term(
            Monomial::generator(num_generators, index),
            Scalar::from_integer(1.into()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> PolyElement {
        if c.is_zero() {
            return PolyElement::zero();
        }
        PolyElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> PolyElement {
        self.scale(&-Scalar::from_integer(1.into()))
    }

    /// Graded-commutative product.
    pub fn mul(&self, other: &PolyElement, gens: &[Generator]) -> PolyElement {
        let mut out = PolyElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((negative, m)) = ma.mul(mb, gens) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// Degree when homogeneous: `Ok(None)` for the zero polynomial,
    /// `Err(())` when terms have different degrees.
    #[allow(clippy::result_unit_err)]
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Result<Option<i64>, ()> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(gens);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return Err(()),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn render(&self, gens: &[Generator]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mono = m.label(gens);
            let part = if m.is_one() {
                c.to_string()
            } else if c == &Scalar::from_integer(1.into()) {
                mono
            } else if c == &Scalar::from_integer((-1).into()) {
                format!("-{mono}")
            } else {
                format!("{c} {mono}")
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}·{:?}", m.exps))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn gens() -> Vec<Generator> {
        vec![Generator::new("x", 2), Generator::new("y", 3), Generator::new("z", 3)]
    }

    #[test]
    fn unit_is_neutral() {
        let g = gens();
        let a = PolyElement::generator(3, 1);
        assert_eq!(PolyElement::unit(3).mul(&a, &g), a);
    }

    #[test]
    fn odd_square_is_zero() {
        let g = gens();
        let y = PolyElement::generator(3, 1);
        assert!(y.mul(&y, &g).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let g = gens();
        let y = PolyElement::generator(3, 1);
        let z = PolyElement::generator(3, 2);
        let yz = y.mul(&z, &g);
        let zy = z.mul(&y, &g);
        assert_eq!(yz, zy.neg());
        assert!(!yz.is_zero());
    }

    #[test]
    fn even_generator_commutes_with_everything() {
        let g = gens();
        let x = PolyElement::generator(3, 0);
        let y = PolyElement::generator(3, 1);
        assert_eq!(x.mul(&y, &g), y.mul(&x, &g));
    }

    #[test]
    fn koszul_sign_cancels_square_of_odd_difference() {
        // In Λ(y, z) with both odd: (y − z)² = −yz − zy = 0.
        let g = gens();
        let y = PolyElement::generator(3, 1);
        let z = PolyElement::generator(3, 2);
        let diff = y.sub(&z);
        assert!(diff.mul(&diff, &g).is_zero());
    }

    #[test]
    fn degree_and_word_length() {
        let g = gens();
        let m = Monomial::from_exps(vec![2, 1, 0]);
        assert_eq!(m.degree(&g), 7);
        assert_eq!(m.word_length(), 3);
        assert_eq!(m.label(&g), "x^2 y");
    }

    #[test]
    fn homogeneity_detection() {
        let g = gens();
        let mut p = PolyElement::generator(3, 1); // degree 3
        assert_eq!(p.homogeneous_degree(&g), Ok(Some(3)));
        p.add_term(Monomial::generator(3, 0), rat(1)); // degree 2
        assert!(p.homogeneous_degree(&g).is_err());
    }
}
