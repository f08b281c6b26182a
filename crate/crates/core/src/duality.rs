//! The dagger involution `K ↦ Hom(K, D)` on a model with a dualizing class.
//!
//! At the level of series the dual of `K` has Poincaré series equal to the
//! Bass series of `K`, which is `ring_bass / P_K` up to a power of `t`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::metric::{sigma_idx, MetricSpace};
use crate::model::SdcModel;
use crate::report::{error_witness, CheckReport};

/// An involution on the classes of a model, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerMap {
    image: Vec<usize>,
    ids: Vec<String>,
}

impl DaggerMap {
    /// Wraps an arbitrary map; [`check_dagger`] says whether it is a dagger.
    pub fn from_images(model: &SdcModel, image: Vec<usize>) -> Self {
        assert_eq!(image.len(), model.len());
        DaggerMap {
            image,
            ids: model.ids().map(ToString::to_string).collect(),
        }
    }

    pub fn identity(model: &SdcModel) -> Self {
        Self::from_images(model, (0..model.len()).collect())
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image_of(&self, id: &str) -> Option<&str> {
        let i = self.ids.iter().position(|x| x == id)?;
        Some(&self.ids[self.image[i]])
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.image.len())
            .filter(|&i| self.image[i] == i)
            .collect()
    }

    /// Each orbit once, as `(id, image id)` with the smaller index first.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        (0..self.image.len())
            .filter(|&i| i <= self.image[i])
            .map(|i| (self.ids[i].as_str(), self.ids[self.image[i]].as_str()))
            .collect()
    }
}

/// Pairs every class with a class whose Poincaré series is its Bass series.
///
/// The pairing must be an involution that swaps top with the dualizing class
/// and reverses the order. When several classes share a series more than one
/// pairing can qualify; the one with the fewest fixed points is chosen, then
/// the lexicographically first.
pub fn build_dagger(model: &SdcModel) -> Result<DaggerMap, Error> {
    let d = model.dualizing().ok_or(Error::NoDualizing)?;
    if model.ring_bass().is_none() {
        return Err(Error::MissingRingBass);
    }
    let n = model.len();
    let mut candidates = Vec::with_capacity(n);
    for k in 0..n {
        let target = model.bass(k).ok_or(Error::MissingRingBass)?;
        let c: Vec<usize> = (0..n)
            .filter(|&j| model.poincare(j).eq_up_to_shift(&target))
            .collect();
        if c.is_empty() {
            return Err(Error::NotClosedUnderDuality(model.id(k).to_string()));
        }
        candidates.push(c);
    }
    let top = model.top();
    if !candidates[top].contains(&d) || !candidates[d].contains(&top) {
        return Err(Error::NoConsistentDuality);
    }
    for max_fixed in 0..=n {
        let mut image = vec![usize::MAX; n];
        image[top] = d;
        image[d] = top;
        let fixed = usize::from(top == d);
        if fixed <= max_fixed && search(model, &candidates, &mut image, 0, fixed, max_fixed) {
            return Ok(DaggerMap::from_images(model, image));
        }
    }
    Err(Error::NoConsistentDuality)
}

fn search(
    model: &SdcModel,
    candidates: &[Vec<usize>],
    image: &mut [usize],
    k: usize,
    fixed: usize,
    max_fixed: usize,
) -> bool {
    let n = image.len();
    if k == n {
        return true;
    }
    if image[k] != usize::MAX {
        return consistent(model, image, k)
            && search(model, candidates, image, k + 1, fixed, max_fixed);
    }
    for &j in &candidates[k] {
        if image[j] != usize::MAX && image[j] != k {
            continue;
        }
        // the partner must also accept k
        if !candidates[j].contains(&k) {
            continue;
        }
        let f = fixed + usize::from(j == k);
        if f > max_fixed {
            continue;
        }
        image[k] = j;
        image[j] = k;
        if consistent(model, image, k)
            && (j == k || consistent(model, image, j))
            && search(model, candidates, image, k + 1, f, max_fixed)
        {
            return true;
        }
        image[k] = usize::MAX;
        if j != k {
            image[j] = usize::MAX;
        }
    }
    false
}

/// Order reversal between `k` and every other assigned class.
fn consistent(model: &SdcModel, image: &[usize], k: usize) -> bool {
    let pk = image[k];
    (0..image.len()).all(|l| {
        let pl = image[l];
        pl == usize::MAX
            || (model.leq(k, l) == model.leq(pl, pk) && model.leq(l, k) == model.leq(pk, pl))
    })
}

/// Involution, top swapped with the dualizing class, series matching and
/// order reversal.
pub fn check_dagger(model: &SdcModel, dagger: &DaggerMap) -> CheckReport {
    let mut r = CheckReport::new("dagger_invariants");
    let n = model.len();
    for k in 0..n {
        let pk = dagger.image(k);
        r.require(dagger.image(pk) == k, || {
            format!("not involutive at {}", model.id(k))
        });
        match model.bass(k) {
            Some(b) => r.require(model.poincare(pk).eq_up_to_shift(&b), || {
                format!(
                    "{} maps to {} whose series {} is not the Bass series {}",
                    model.id(k),
                    model.id(pk),
                    model.poincare(pk),
                    b
                )
            }),
            None => r.fail(format!("{}: Bass series unavailable", model.id(k))),
        }
        for l in 0..n {
            let pl = dagger.image(l);
            r.require(model.leq(k, l) == model.leq(pl, pk), || {
                format!("order not reversed on {} and {}", model.id(k), model.id(l))
            });
        }
    }
    match model.dualizing() {
        None => r.fail("no dualizing class"),
        Some(d) => r.require(dagger.image(model.top()) == d, || {
            format!("{} does not map to {}", model.top_id(), model.id(d))
        }),
    }
    r
}

/// Distances and edge weights are invariant under the pairing.
pub fn check_isometry(model: &SdcModel, dagger: &DaggerMap) -> CheckReport {
    let mut r = CheckReport::new("dagger_isometry");
    let s = match MetricSpace::new(model) {
        Ok(s) => s,
        Err(e) => {
            r.fail(error_witness("distance table", &e));
            return r;
        }
    };
    let n = model.len();
    for i in 0..n {
        for j in i + 1..n {
            let (pi, pj) = (dagger.image(i), dagger.image(j));
            let (a, b) = (s.distance(i, j), s.distance(pi, pj));
            let same = match (a.exact(), b.exact()) {
                (Some(x), Some(y)) => x == y,
                _ => a.possibly_eq(b),
            };
            r.require(same, || {
                format!(
                    "dist({},{}) = {} but dist({},{}) = {}",
                    model.id(i),
                    model.id(j),
                    a,
                    model.id(pi),
                    model.id(pj),
                    b
                )
            });
        }
    }
    for (k, l) in model.strict_pairs() {
        let (pk, pl) = (dagger.image(k), dagger.image(l));
        if !model.leq(pl, pk) {
            r.fail(format!(
                "{} below {} but {} not below {}",
                model.id(k),
                model.id(l),
                model.id(pl),
                model.id(pk)
            ));
            continue;
        }
        match (sigma_idx(model, k, l), sigma_idx(model, pl, pk)) {
            (Ok(a), Ok(b)) => r.require(a.possibly_eq(&b), || {
                format!(
                    "sigma({},{}) = {} but sigma({},{}) = {}",
                    model.id(k),
                    model.id(l),
                    a,
                    model.id(pl),
                    model.id(pk),
                    b
                )
            }),
            (Err(e), _) | (_, Err(e)) => r.fail(error_witness("edge weight", &e)),
        }
    }
    r
}

/// A fixed point, or an odd number of classes, forces the model to be
/// Gorenstein; otherwise it cannot come from a ring.
pub fn check_fixed_points(model: &SdcModel, dagger: &DaggerMap) -> CheckReport {
    let mut r = CheckReport::new("dagger_fixed_points");
    let gorenstein = model.is_gorenstein();
    let fixed = dagger.fixed_points();
    if !fixed.is_empty() && !gorenstein {
        let names: Vec<&str> = fixed.iter().map(|&i| model.id(i)).collect();
        r.fail(format!(
            "non-Gorenstein model with fixed points {}: unrealizable",
            names.join(", ")
        ));
    }
    if model.len() % 2 == 1 && !gorenstein {
        r.fail(format!(
            "non-Gorenstein model with {} classes: unrealizable",
            model.len()
        ));
    }
    if r.pass {
        r.note(format!(
            "{} classes, {} fixed points, {}",
            model.len(),
            fixed.len(),
            if gorenstein {
                "Gorenstein"
            } else {
                "not Gorenstein"
            }
        ));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::series::LaurentSeries;

    fn s(text: &str) -> LaurentSeries {
        parse_series(text).unwrap()
    }

    #[test]
    fn gorenstein_model_has_identity_dagger() {
        let m = SdcModel::builder("g", "R")
            .class("R", LaurentSeries::one())
            .dualizing("R")
            .ring_bass(LaurentSeries::monomial(2))
            .build()
            .unwrap();
        let d = build_dagger(&m).unwrap();
        assert_eq!(d, DaggerMap::identity(&m));
        for r in [
            check_dagger(&m, &d),
            check_isometry(&m, &d),
            check_fixed_points(&m, &d),
        ] {
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn two_classes_swap() {
        let pd = s("(2-t)/(1-2*t)");
        let m = SdcModel::builder("sq", "R")
            .class("R", LaurentSeries::one())
            .class("D", pd.clone())
            .order("D", "R")
            .dualizing("D")
            .ring_bass(pd)
            .build()
            .unwrap();
        let d = build_dagger(&m).unwrap();
        assert_eq!(d.image_of("R"), Some("D"));
        assert_eq!(d.pairs(), [("D", "R")]);
        assert!(check_isometry(&m, &d).pass);
        assert!(check_fixed_points(&m, &d).pass);
    }

    #[test]
    fn errors() {
        let m = SdcModel::builder("x", "R")
            .class("R", LaurentSeries::one())
            .build()
            .unwrap();
        assert_eq!(build_dagger(&m).unwrap_err(), Error::NoDualizing);
        let pd = s("1/(1-2*t)^2");
        let m = SdcModel::builder("x", "R")
            .class("R", LaurentSeries::one())
            .class("K", s("1/(1-3*t)"))
            .class("D", pd.clone())
            .order("D", "K")
            .order("K", "R")
            .dualizing("D")
            .build()
            .unwrap();
        assert_eq!(build_dagger(&m).unwrap_err(), Error::MissingRingBass);
        let m = SdcModel::builder("x", "R")
            .class("R", LaurentSeries::one())
            .class("K", s("1/(1-2*t)"))
            .class("D", pd.clone())
            .order("D", "K")
            .order("K", "R")
            .dualizing("D")
            .ring_bass(s("1/(1-2*t)^3"))
            .build()
            .unwrap();
        assert_eq!(
            build_dagger(&m).unwrap_err(),
            Error::NotClosedUnderDuality("R".into())
        );
    }

    #[test]
    fn three_classes_are_flagged() {
        let pd = s("1/(1-2*t)^2");
        let m = SdcModel::builder("three", "R")
            .class("R", LaurentSeries::one())
            .class("K", s("1/(1-2*t)"))
            .class("D", pd.clone())
            .order("D", "K")
            .order("K", "R")
            .dualizing("D")
            .ring_bass(pd)
            .build()
            .unwrap();
        assert!(m.validate().is_valid());
        let d = build_dagger(&m).unwrap();
        assert_eq!(d.fixed_points(), [m.index_of("K").unwrap()]);
        assert!(check_dagger(&m, &d).pass);
        let r = check_fixed_points(&m, &d);
        assert!(!r.pass);
        assert_eq!(r.witnesses.len(), 2);
    }

    #[test]
    fn wrong_map_is_caught() {
        let pd = s("(2-t)/(1-2*t)");
        let m = SdcModel::builder("sq", "R")
            .class("R", LaurentSeries::one())
            .class("D", pd.clone())
            .order("D", "R")
            .dualizing("D")
            .ring_bass(pd)
            .build()
            .unwrap();
        let id = DaggerMap::identity(&m);
        assert!(!check_dagger(&m, &id).pass);
        assert!(!check_fixed_points(&m, &id).pass);
    }
}
