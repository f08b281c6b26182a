//! Concrete models: square-zero rings, an iterated trivial extension, and
//! two localization pairs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;

use crate::change::{cobase_change_model, HomomorphismDescriptor};
use crate::model::SdcModel;
use crate::poly::IntPolynomial;
use crate::series::LaurentSeries;

/// Poincaré series of the dualizing module of `k ⋉ k^r`, which is also the
/// ring's Bass series: `(r - t)/(1 - r t) = r + (r^2 - 1) t / (1 - r t)`.
///
/// The dualizing module needs `r` generators and its first syzygy is a
/// vector space of dimension `r^2 - 1`; every later syzygy is `r` times the
/// previous one. The test suite recomputes these Betti numbers from a minimal
/// free resolution over a prime field.
pub fn square_zero_dualizing_series(r: i64) -> LaurentSeries {
    assert!(r >= 2, "embedding dimension must be at least 2");
    LaurentSeries::new(
        0,
        IntPolynomial::from_i64s(&[r, -1]),
        IntPolynomial::from_i64s(&[1, -r]),
    )
    .expect("nonzero denominator")
}

/// The two classes of `k ⋉ k^r`: the ring `R` and its dualizing module `D`.
pub fn square_zero_model(r: i64) -> SdcModel {
    let pd = square_zero_dualizing_series(r);
    SdcModel::builder(format!("square0_{r}"), "R")
        .class("R", LaurentSeries::one())
        .class("D", pd.clone())
        .order("D", "R")
        .dualizing("D")
        .ring_bass(pd)
        .build()
        .expect("well-formed")
}

/// The map `R → R ⋉ R^s`, whose Bass series is that of its closed fiber `k ⋉ k^s`.
pub fn trivial_extension_phi(source: &str, s: i64) -> HomomorphismDescriptor {
    HomomorphismDescriptor::new(
        format!("trivial_extension_{s}"),
        square_zero_dualizing_series(s),
        source,
        "S",
    )
}

/// `S = R ⋉ R^s` for `R = k ⋉ k^r`, with classes `S`, `DtensorS`, `cbcR`, `cbcD`.
pub fn iterated_model(r: i64, s: i64) -> SdcModel {
    let source = square_zero_model(r);
    let phi = trivial_extension_phi(source.name(), s);
    cobase_change_model(&source, &phi)
        .expect("ids are distinct")
        .model
        .with_name(format!("iterated_{r}_{s}"))
}

/// A model, its localization, and the class map between them.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub big: SdcModel,
    pub small: SdcModel,
    pub class_map: BTreeMap<String, String>,
}

fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|&(a, b)| (String::from(a), String::from(b)))
        .collect()
}

/// A non-Gorenstein ring whose localization is Gorenstein: the two classes
/// collapse to one. The big model is the two-class square-zero model with
/// `r = 2`, standing in for any non-Gorenstein ring with a dualizing complex.
pub fn decreasing_strict() -> Specialization {
    let small = SdcModel::builder("decreasing_strict_local", "Rp")
        .class("Rp", LaurentSeries::one())
        .dualizing("Rp")
        .ring_bass(LaurentSeries::one())
        .build()
        .expect("well-formed");
    Specialization {
        big: square_zero_model(2).with_name("decreasing_strict"),
        small,
        class_map: map(&[("R", "Rp"), ("D", "Rp")]),
    }
}

/// `k[[X,Y,Z]]/(X,Y)^2` localized at `(X,Y)`: both sides have two classes at
/// distance 2, the curvature of the dualizing module of a square-zero ring of
/// embedding dimension 2.
pub fn decreasing_equal() -> Specialization {
    let pe = square_zero_dualizing_series(2);
    let two = |name: &str, top: &str, e: &str| {
        SdcModel::builder(name, top)
            .class(top, LaurentSeries::one())
            .class(e, pe.clone())
            .order(e, top)
            .dualizing(e)
            .ring_bass(pe.clone())
            .build()
            .expect("well-formed")
    };
    Specialization {
        big: two("decreasing_equal", "S", "E"),
        small: two("decreasing_equal_local", "Sq", "Eq"),
        class_map: map(&[("S", "Sq"), ("E", "Eq")]),
    }
}

/// `1/(1 - c t)`.
pub fn geometric(c: i64) -> LaurentSeries {
    LaurentSeries::geometric(c)
}

/// Product of `1/(1 - c t)` over a multiset of factors.
pub fn geometric_product(factors: &[i64]) -> LaurentSeries {
    let mut den = IntPolynomial::one();
    for &c in factors {
        den = &den * &IntPolynomial::new(alloc::vec![BigInt::from(1), BigInt::from(-c)]);
    }
    LaurentSeries::new(0, IntPolynomial::one(), den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::Curvature;
    use crate::metric::{diameter, distance};

    #[test]
    fn square_zero_distances() {
        for r in 2..=6 {
            let m = square_zero_model(r);
            assert!(m.validate().is_valid());
            assert!(!m.is_gorenstein());
            assert_eq!(distance(&m, "R", "D").unwrap(), Curvature::from_integer(r));
            assert_eq!(diameter(&m).unwrap(), Curvature::from_integer(r));
        }
    }

    #[test]
    fn iterated_ids_and_series() {
        let m = iterated_model(2, 3);
        assert_eq!(
            m.ids().collect::<alloc::vec::Vec<_>>(),
            ["DtensorS", "S", "cbcD", "cbcR"]
        );
        assert_eq!(m.top_id(), "S");
        assert_eq!(m.dualizing_id(), Some("cbcD"));
        assert!(!m.is_gorenstein());
        let p = |id: &str| m.poincare(m.index_of(id).unwrap()).clone();
        assert_eq!(p("cbcR"), square_zero_dualizing_series(3));
        assert_eq!(
            p("cbcD"),
            &square_zero_dualizing_series(2) * &square_zero_dualizing_series(3)
        );
    }

    #[test]
    fn geometric_products() {
        assert_eq!(geometric_product(&[]), LaurentSeries::one());
        assert_eq!(geometric_product(&[2, 3]), &geometric(2) * &geometric(3));
    }
}
