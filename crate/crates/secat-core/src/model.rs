//! Finitely presented Sullivan models `(ΛV, d)` and their morphisms.
//!
//! A model is a free graded-commutative algebra on finitely many generators
//! of positive degree together with a degree +1 derivation `d` with `d² = 0`.
//! Since `d` is a derivation, `d² = 0` holds everywhere as soon as it holds on
//! generators, so the condition is checked exactly at construction, without
//! any degree cap.

use crate::error::Error;
use crate::poly::{Generator, Monomial, PolyElement};
use crate::rational::{rat, Scalar};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct SullivanModel {
    generators: Vec<Generator>,
    /// `differentials[i] = d(generator i)`, a homogeneous polynomial of
    /// degree `deg(gᵢ) + 1` (possibly zero).
    differentials: Vec<PolyElement>,
}

impl SullivanModel {
    pub fn new(
        generators: Vec<Generator>,
        differentials: Vec<PolyElement>,
    ) -> Result<Arc<Self>, Error> {
        assert_eq!(generators.len(), differentials.len());
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree <= 0 {
                return Err(Error::NonPositiveDegree(g.name.clone(), g.degree));
            }
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let model = SullivanModel {
            generators,
            differentials,
        };
        for (i, dg) in model.differentials.iter().enumerate() {
            let expected = model.generators[i].degree + 1;
            match dg.homogeneous_degree(&model.generators) {
                Ok(None) => {}
                Ok(Some(d)) if d == expected => {}
                _ => {
                    return Err(Error::InhomogeneousDifferential {
                        name: model.generators[i].name.clone(),
                        expected,
                    })
                }
            }
        }
        for (i, dg) in model.differentials.iter().enumerate() {
            let dd = model.d(dg);
            if !dd.is_zero() {
                let witness = dd
                    .terms()
                    .next()
                    .map(|(m, _)| m.label(&model.generators))
                    .unwrap_or_default();
                return Err(Error::DifferentialNotSquareZero {
                    name: model.generators[i].name.clone(),
                    witness,
                });
            }
        }
        Ok(Arc::new(model))
    }

    /// Model with no generators: the ground field ℚ in degree 0.
    pub fn ground_field() -> Arc<Self> {
        SullivanModel::new(Vec::new(), Vec::new()).expect("empty model is valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn differential_of(&self, index: usize) -> &PolyElement {
        &self.differentials[index]
    }

    pub fn max_generator_degree(&self) -> i64 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn min_generator_degree(&self) -> i64 {
        self.generators.iter().map(|g| g.degree).min().unwrap_or(1)
    }

    /// Leibniz extension of the generator differentials.
    pub fn d(&self, p: &PolyElement) -> PolyElement {
        let n = self.generators.len();
        let mut out = PolyElement::zero();
        for (mono, coef) in p.terms() {
            let mut prefix_degree: i64 = 0;
            for i in 0..n {
                let e = mono.exp(i);
                if e > 0 && !self.differentials[i].is_zero() {
                    // m = prefix · gᵢ^e · suffix;  the term is
                    // (−1)^{|prefix|} e · (prefix · gᵢ^{e−1}) · dgᵢ · suffix.
                    let mut head = vec![0u32; n];
                    let mut tail = vec![0u32; n];
                    for j in 0..n {
                        if j < i {
                            head[j] = mono.exp(j);
                        } else if j == i {
                            head[j] = e - 1;
                        } else {
                            tail[j] = mono.exp(j);
                        }
                    }
                    let sign = if prefix_degree % 2 == 0 { rat(1) } else { rat(-1) };
                    let c = coef * rat(e as i64) * sign;
                    let head_poly = PolyElement::from_term(Monomial::from_exps(head), c);
                    let term = head_poly
                        .mul(&self.differentials[i], &self.generators)
                        .mul(
                            &PolyElement::from_term(Monomial::from_exps(tail), Scalar::from_integer(1.into())),
                            &self.generators,
                        );
                    out = out.add(&term);
                }
                prefix_degree += e as i64 * self.generators[i].degree;
            }
        }
        out
    }

    /// All monomials of total degree `k`, in canonical order (exponent
    /// vectors in descending lexicographic order, so powers of earlier
    /// generators come first). Complete and duplicate-free by construction.
    pub fn basis_in_degree(&self, k: i64) -> Vec<Monomial> {
        if k < 0 {
            return Vec::new();
        }
        if k == 0 {
            return vec![Monomial::one(self.generators.len())];
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.enumerate(0, k, &mut exps, &mut out);
        out.sort_by(|a, b| b.exps().cmp(a.exps()));
        out
    }

    fn enumerate(&self, idx: usize, remaining: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial::from_exps(exps.clone()));
            return;
        }
        if idx == self.generators.len() {
            return;
        }
        let g = &self.generators[idx];
        let max_e = if g.is_odd() {
            1.min(remaining / g.degree) as u32
        } else {
            (remaining / g.degree) as u32
        };
        for e in 0..=max_e {
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - e as i64 * g.degree, exps, out);
        }
        exps[idx] = 0;
    }
}

/// Morphism of Sullivan models, determined by generator images and extended
/// multiplicatively. Degree preservation and the chain condition are checked
/// on generators, which suffices for the multiplicative extension.
#[derive(Clone, Debug)]
pub struct CdgaMorphism {
    pub source: Arc<SullivanModel>,
    pub target: Arc<SullivanModel>,
    images: Vec<PolyElement>,
}

impl CdgaMorphism {
    pub fn new(
        source: Arc<SullivanModel>,
        target: Arc<SullivanModel>,
        images: Vec<PolyElement>,
    ) -> Result<Self, Error> {
        assert_eq!(images.len(), source.num_generators());
        for (i, img) in images.iter().enumerate() {
            let expected = source.generators()[i].degree;
            match img.homogeneous_degree(target.generators()) {
                Ok(None) => {}
                Ok(Some(d)) if d == expected => {}
                _ => {
                    return Err(Error::InhomogeneousDifferential {
                        name: source.generators()[i].name.clone(),
                        expected,
                    })
                }
            }
        }
        let m = CdgaMorphism {
            source,
            target,
            images,
        };
        for i in 0..m.source.num_generators() {
            let lhs = m.apply(m.source.differential_of(i));
            let rhs = m.target.d(&m.images[i]);
            if lhs != rhs {
                return Err(Error::NotChainMap {
                    degree: m.source.generators()[i].degree + 1,
                    witness: m.source.generators()[i].name.clone(),
                });
            }
        }
        Ok(m)
    }

    pub fn image_of(&self, index: usize) -> &PolyElement {
        &self.images[index]
    }

    pub fn apply(&self, p: &PolyElement) -> PolyElement {
        let tgens = self.target.generators();
        let n = self.source.num_generators();
        let mut out = PolyElement::zero();
        for (mono, coef) in p.terms() {
            let mut prod = PolyElement::unit(tgens.len());
            for i in 0..n {
                for _ in 0..mono.exp(i) {
                    prod = prod.mul(&self.images[i], tgens);
                    if prod.is_zero() {
                        break;
                    }
                }
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod.scale(coef));
        }
        out
    }
}

/// The tensor square `ΛV ⊗ ΛV ≅ Λ(V ⊕ V′)` with duplicated, primed
/// generators, the multiplication morphism `μ (v ↦ v, v′ ↦ v)` and the two
/// factor inclusions.
#[derive(Clone)]
pub struct TensorSquare {
    pub base: Arc<SullivanModel>,
    pub model: Arc<SullivanModel>,
    pub mu: CdgaMorphism,
    pub include_left: CdgaMorphism,
    pub include_right: CdgaMorphism,
}

pub fn tensor_square(base: &Arc<SullivanModel>) -> TensorSquare {
    let n = base.num_generators();
    let mut gens = base.generators().to_vec();
    for g in base.generators() {
        gens.push(Generator::new(format!("{}'", g.name), g.degree));
    }

    let widen = |p: &PolyElement, primed: bool| -> PolyElement {
        let mut out = PolyElement::zero();
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; 2 * n];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[if primed { n + i } else { i }] = e;
            }
            out.add_term(Monomial::from_exps(exps), c.clone());
        }
        out
    };

    let mut diffs = Vec::with_capacity(2 * n);
    for i in 0..n {
        diffs.push(widen(base.differential_of(i), false));
    }
    for i in 0..n {
        diffs.push(widen(base.differential_of(i), true));
    }
    let model = SullivanModel::new(gens, diffs).expect("tensor square of a valid model is valid");

    let mut mu_images = Vec::with_capacity(2 * n);
    for i in 0..n {
        mu_images.push(PolyElement::generator(n, i));
    }
    for i in 0..n {
        mu_images.push(PolyElement::generator(n, i));
    }
    let mu = CdgaMorphism::new(Arc::clone(&model), Arc::clone(base), mu_images)
        .expect("μ is a chain map");

    let left_images = (0..n).map(|i| PolyElement::generator(2 * n, i)).collect();
    let right_images = (0..n).map(|i| PolyElement::generator(2 * n, n + i)).collect();
    let include_left = CdgaMorphism::new(Arc::clone(base), Arc::clone(&model), left_images)
        .expect("left inclusion is a chain map");
    let include_right = CdgaMorphism::new(Arc::clone(base), Arc::clone(&model), right_images)
        .expect("right inclusion is a chain map");

    TensorSquare {
        base: Arc::clone(base),
        model,
        mu,
        include_left,
        include_right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// The 2-sphere model Λ(x₂, y₃) with dy = x².
    fn s2() -> Arc<SullivanModel> {
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
        SullivanModel::new(gens, vec![PolyElement::zero(), dy]).unwrap()
    }

    #[test]
    fn leibniz_on_s2() {
        let m = s2();
        // d(xy) = x·dy = x³ since dx = 0 and |x| is even.
        let xy = PolyElement::from_term(Monomial::from_exps(vec![1, 1]), rat(1));
        let expect = PolyElement::from_term(Monomial::from_exps(vec![3, 0]), rat(1));
        assert_eq!(m.d(&xy), expect);
        // d(1) = 0.
        assert!(m.d(&PolyElement::unit(2)).is_zero());
    }

    #[test]
    fn basis_enumeration_on_s2() {
        let m = s2();
        assert_eq!(m.basis_in_degree(0).len(), 1);
        // degree 5: only xy (y² = 0).
        let b5 = m.basis_in_degree(5);
        assert_eq!(b5.len(), 1);
        assert_eq!(b5[0].exps(), &[1, 1]);
        // degree 4: only x².
        let b4 = m.basis_in_degree(4);
        assert_eq!(b4.len(), 1);
        assert_eq!(b4[0].exps(), &[2, 0]);
    }

    #[test]
    fn d_squared_violation_is_rejected() {
        // d y = x with |x| = |y| = 3 is inhomogeneous; d y = z, d z = w-type
        // chains are fine, but dy = x² with dx = y would break d².
        let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
        let dx = PolyElement::generator(2, 1); // dx = y, degree 3 = 2+1 ✓
        let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1)); // dy = x²
        // d(dx) = dy = x² ≠ 0.
        assert!(matches!(
            SullivanModel::new(gens, vec![dx, dy]),
            Err(Error::DifferentialNotSquareZero { .. })
        ));
    }

    #[test]
    fn degree_zero_generator_rejected() {
        let gens = vec![Generator::new("x", 0)];
        assert!(matches!(
            SullivanModel::new(gens, vec![PolyElement::zero()]),
            Err(Error::NonPositiveDegree(..))
        ));
    }

    #[test]
    fn tensor_square_of_sphere() {
        let base = SullivanModel::new(
            vec![Generator::new("x", 3)],
            vec![PolyElement::zero()],
        )
        .unwrap();
        let ts = tensor_square(&base);
        assert_eq!(ts.model.num_generators(), 2);
        // μ(x − x′) = 0.
        let diff = PolyElement::generator(2, 0).sub(&PolyElement::generator(2, 1));
        assert!(ts.mu.apply(&diff).is_zero());
        // μ ∘ include_left = id.
        let x = PolyElement::generator(1, 0);
        assert_eq!(ts.mu.apply(&ts.include_left.apply(&x)), x);
    }

    #[test]
    fn tensor_square_duplicates_differential() {
        let ts = tensor_square(&s2());
        // d(y′) = x′².
        let dy_primed = ts.model.differential_of(3);
        let expect = PolyElement::from_term(Monomial::from_exps(vec![0, 0, 2, 0]), rat(1));
        assert_eq!(dy_primed, &expect);
    }
}
