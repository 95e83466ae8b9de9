//! Standard models used by the test suites and examples.

use crate::dga::ExplicitAlgebra;
use crate::graded::{GradedMatrixFamily, GradedVectorSpace};
use crate::model::SullivanModel;
use crate::poly::{Generator, Monomial, PolyElement};
use crate::rational::rat;
use std::collections::HashMap;
use std::sync::Arc;

/// `Λ(x₂, y₃)`, `dy = x²`: the 2-sphere.
pub fn s2() -> Arc<SullivanModel> {
    let gens = vec![Generator::new("x", 2), Generator::new("y", 3)];
    let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0]), rat(1));
    SullivanModel::new(gens, vec![PolyElement::zero(), dy]).expect("valid model")
}

/// `Λ(x₃)`: the 3-sphere.
pub fn s3() -> Arc<SullivanModel> {
    SullivanModel::new(vec![Generator::new("x", 3)], vec![PolyElement::zero()])
        .expect("valid model")
}

/// `Λ(x₂, y₅)`, `dy = x³`: the complex projective plane.
pub fn cp2() -> Arc<SullivanModel> {
    let gens = vec![Generator::new("x", 2), Generator::new("y", 5)];
    let dy = PolyElement::from_term(Monomial::from_exps(vec![3, 0]), rat(1));
    SullivanModel::new(gens, vec![PolyElement::zero(), dy]).expect("valid model")
}

/// `Λ(x₂, y₃, z₃)`, `dy = x²`: the product S² × S³.
pub fn s2_x_s3() -> Arc<SullivanModel> {
    let gens = vec![
        Generator::new("x", 2),
        Generator::new("y", 3),
        Generator::new("z", 3),
    ];
    let dy = PolyElement::from_term(Monomial::from_exps(vec![2, 0, 0]), rat(1));
    SullivanModel::new(gens, vec![PolyElement::zero(), dy, PolyElement::zero()])
        .expect("valid model")
}

/// `Λ(x₃, y₃)`: the product S³ × S³.
pub fn s3_x_s3() -> Arc<SullivanModel> {
    let gens = vec![Generator::new("x", 3), Generator::new("y", 3)];
    SullivanModel::new(gens, vec![PolyElement::zero(), PolyElement::zero()])
        .expect("valid model")
}

/// The non-PD algebra `ℚ ⊕ ℚa₂ ⊕ ℚb₂` with `a² = ab = b² = 0`: a negative
/// control for Poincaré duality detection (has no top class pairing).
pub fn non_pd_algebra() -> Arc<ExplicitAlgebra> {
    let mut space = GradedVectorSpace::new();
    space.insert(0, vec!["1".into()]);
    space.insert(2, vec!["a".into(), "b".into()]);
    let mut products = HashMap::new();
    products.insert((0, 0, 0, 0), vec![rat(1)]);
    products.insert((0, 0, 2, 0), vec![rat(1), rat(0)]);
    products.insert((0, 0, 2, 1), vec![rat(0), rat(1)]);
    products.insert((2, 0, 0, 0), vec![rat(1), rat(0)]);
    products.insert((2, 1, 0, 0), vec![rat(0), rat(1)]);
    ExplicitAlgebra::new(4, space, GradedMatrixFamily::new(1), products)
}
