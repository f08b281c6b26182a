//! Base change and cobase change along a local homomorphism of finite flat
//! dimension, described only by its Bass series `I_φ`.
//!
//! Base change sends `K` to `K ⊗ S` and keeps Poincaré series. Cobase change
//! sends `K` to `K†φ` with Poincaré series `P_K · I_φ`. The two families
//! coincide exactly when `I_φ` has curvature zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::curvature::{curvature, Curvature};
use crate::error::Error;
use crate::metric::MetricSpace;
use crate::model::SdcModel;
use crate::report::{error_witness, CheckReport};
use crate::series::LaurentSeries;
use crate::Settings;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismDescriptor {
    pub name: String,
    pub bass_phi: LaurentSeries,
    /// Name of the source model.
    pub source: String,
    /// Name of the target ring; also the id of the image of the top class.
    pub target_name: String,
}

impl HomomorphismDescriptor {
    pub fn new(
        name: impl Into<String>,
        bass_phi: LaurentSeries,
        source: impl Into<String>,
        target_name: impl Into<String>,
    ) -> Self {
        HomomorphismDescriptor {
            name: name.into(),
            bass_phi,
            source: source.into(),
            target_name: target_name.into(),
        }
    }

    /// Injective curvature of the map: the curvature of its Bass series.
    pub fn injcurv(&self, settings: &Settings) -> Result<Curvature, Error> {
        curvature(&self.bass_phi, settings)
    }

    pub fn is_gorenstein(&self, settings: &Settings) -> Result<bool, Error> {
        Ok(self.injcurv(settings)?.is_zero())
    }

    /// Id of `K ⊗ S` in the target.
    pub fn base_id(&self, model: &SdcModel, k: usize) -> String {
        if k == model.top() {
            self.target_name.clone()
        } else {
            format!("{}tensor{}", model.id(k), self.target_name)
        }
    }

    /// Id of `K†φ` in the target.
    pub fn cobase_id(&self, model: &SdcModel, k: usize) -> String {
        format!("cbc{}", model.id(k))
    }
}

pub fn injcurv_phi(phi: &HomomorphismDescriptor, settings: &Settings) -> Result<Curvature, Error> {
    phi.injcurv(settings)
}

fn check_unique(ids: &[String]) -> Result<(), Error> {
    let mut seen: Vec<&String> = ids.iter().collect();
    seen.sort();
    for w in seen.windows(2) {
        if w[0] == w[1] {
            return Err(Error::IdCollision(w[0].clone()));
        }
    }
    Ok(())
}

/// The image of the base-change map: same series and order, Bass series
/// multiplied by `I_φ`. The dualizing class is carried over only when `φ` is
/// Gorenstein, since otherwise `D ⊗ S` is not dualizing.
pub fn base_change(model: &SdcModel, phi: &HomomorphismDescriptor) -> Result<SdcModel, Error> {
    let ids: Vec<String> = (0..model.len()).map(|k| phi.base_id(model, k)).collect();
    check_unique(&ids)?;
    let mut b = SdcModel::builder(
        format!("{}tensor{}", model.name(), phi.target_name),
        ids[model.top()].clone(),
    )
    .settings(model.settings().clone());
    for (k, c) in model.classes().iter().enumerate() {
        let bass = c.bass.as_ref().map(|i| i * &phi.bass_phi);
        b = b.class_with_bass(ids[k].clone(), c.poincare.clone(), bass);
    }
    for (i, j) in model.strict_pairs() {
        b = b.order(ids[i].clone(), ids[j].clone());
    }
    if let Some(rb) = model.ring_bass() {
        b = b.ring_bass(rb * &phi.bass_phi);
    }
    if let Some(d) = model.dualizing() {
        if phi.is_gorenstein(model.settings())? {
            b = b.dualizing(ids[d].clone());
        }
    }
    b.build()
}

/// A cobase-change model with the ids of both families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobaseChange {
    pub model: SdcModel,
    /// Source class id to the id of `K ⊗ S`.
    pub base: BTreeMap<String, String>,
    /// Source class id to the id of `K†φ`.
    pub dagger: BTreeMap<String, String>,
}

impl CobaseChange {
    pub fn base_id(&self, source_id: &str) -> Result<&str, Error> {
        self.base
            .get(source_id)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownClass(source_id.to_string()))
    }

    pub fn dagger_id(&self, source_id: &str) -> Result<&str, Error> {
        self.dagger
            .get(source_id)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownClass(source_id.to_string()))
    }
}

/// Both families in one model over the target.
///
/// `K†φ` has Poincaré series `P_K · I_φ`. Order: each family copies the
/// source order, and `K†φ ⊴ L ⊗ S` exactly when `K ⊴ L`; the opposite cross
/// relation is never added. When `φ` is Gorenstein the families coincide and
/// the result is the base change.
pub fn cobase_change_model(
    model: &SdcModel,
    phi: &HomomorphismDescriptor,
) -> Result<CobaseChange, Error> {
    let n = model.len();
    let base_ids: Vec<String> = (0..n).map(|k| phi.base_id(model, k)).collect();
    if phi.is_gorenstein(model.settings())? {
        let merged = base_change(model, phi)?;
        let base: BTreeMap<String, String> = (0..n)
            .map(|k| (model.id(k).to_string(), base_ids[k].clone()))
            .collect();
        return Ok(CobaseChange {
            model: merged,
            dagger: base.clone(),
            base,
        });
    }
    let dagger_ids: Vec<String> = (0..n).map(|k| phi.cobase_id(model, k)).collect();
    let mut all = base_ids.clone();
    all.extend(dagger_ids.iter().cloned());
    check_unique(&all)?;

    let mut b = SdcModel::builder(
        format!("{}cbc{}", model.name(), phi.target_name),
        base_ids[model.top()].clone(),
    )
    .settings(model.settings().clone());
    for (k, c) in model.classes().iter().enumerate() {
        let base_bass = c.bass.as_ref().map(|i| i * &phi.bass_phi);
        b = b.class_with_bass(base_ids[k].clone(), c.poincare.clone(), base_bass);
        b = b.class_with_bass(
            dagger_ids[k].clone(),
            &c.poincare * &phi.bass_phi,
            c.bass.clone(),
        );
    }
    for k in 0..n {
        for l in 0..n {
            if !model.leq(k, l) {
                continue;
            }
            if k != l {
                b = b.order(base_ids[k].clone(), base_ids[l].clone());
                b = b.order(dagger_ids[k].clone(), dagger_ids[l].clone());
            }
            b = b.order(dagger_ids[k].clone(), base_ids[l].clone());
        }
    }
    if let Some(rb) = model.ring_bass() {
        b = b.ring_bass(rb * &phi.bass_phi);
    }
    if let Some(d) = model.dualizing() {
        b = b.dualizing(dagger_ids[d].clone());
    }
    Ok(CobaseChange {
        model: b.build()?,
        base: (0..n)
            .map(|k| (model.id(k).to_string(), base_ids[k].clone()))
            .collect(),
        dagger: (0..n)
            .map(|k| (model.id(k).to_string(), dagger_ids[k].clone()))
            .collect(),
    })
}

fn same(a: &Curvature, b: &Curvature) -> bool {
    match (a.exact(), b.exact()) {
        (Some(x), Some(y)) => x == y,
        _ => a.possibly_eq(b),
    }
}

/// Distances between the two families against the source distances: for
/// `K ⊴ L`, `dist(K†φ, L⊗S) = max(dist(K, L), injcurv φ)`, and for every pair
/// `dist(K†φ, L⊗S) ≤ injcurv φ + dist(K, L)`. An empty `pairs` means all
/// ordered pairs of source classes.
pub fn check_mixed_distance(
    source: &SdcModel,
    cobase: &CobaseChange,
    phi: &HomomorphismDescriptor,
    pairs: &[(String, String)],
) -> CheckReport {
    let mut r = CheckReport::new("mixed_distance");
    let pairs: Vec<(String, String)> = if pairs.is_empty() {
        source
            .ids()
            .flat_map(|k| source.ids().map(move |l| (k.to_string(), l.to_string())))
            .collect()
    } else {
        pairs.to_vec()
    };
    let (sr, ss, inj) = match (
        MetricSpace::new(source),
        MetricSpace::new(&cobase.model),
        phi.injcurv(source.settings()),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            r.fail(error_witness("setup", &e));
            return r;
        }
    };
    for (k, l) in &pairs {
        let lookup = || -> Result<(usize, usize, usize, usize), Error> {
            Ok((
                source.index_of(k)?,
                source.index_of(l)?,
                cobase.model.index_of(cobase.dagger_id(k)?)?,
                cobase.model.index_of(cobase.base_id(l)?)?,
            ))
        };
        let (ik, il, dk, bl) = match lookup() {
            Ok(x) => x,
            Err(e) => {
                r.fail(error_witness(&format!("pair ({k}, {l})"), &e));
                continue;
            }
        };
        let d_r = sr.distance(ik, il);
        let d_s = ss.distance(dk, bl);
        let bound = &inj + d_r;
        r.require(d_s.possibly_le(&bound), || {
            format!(
                "dist({}, {}) = {} exceeds {}",
                cobase.model.id(dk),
                cobase.model.id(bl),
                d_s,
                bound
            )
        });
        if source.leq(ik, il) {
            let expected = d_r.max(&inj);
            r.require(same(d_s, &expected), || {
                format!(
                    "{k} below {l}: dist({}, {}) = {} but max(dist, injcurv) = {}",
                    cobase.model.id(dk),
                    cobase.model.id(bl),
                    d_s,
                    expected
                )
            });
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Strict,
    Equal,
    /// Interval enclosures overlap; consistent with the inequality.
    Undecided,
    Violated,
}

/// One pair compared across a specialization map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub k: String,
    pub l: String,
    pub big: Curvature,
    pub small: Curvature,
    pub relation: Relation,
}

/// Distances can only shrink along an order-preserving class map such as
/// localization. Strict decreases are reported as findings, not failures.
pub fn check_specialization(
    big: &SdcModel,
    small: &SdcModel,
    class_map: &BTreeMap<String, String>,
) -> Result<(CheckReport, Vec<Comparison>), Error> {
    let n = big.len();
    let mut image = Vec::with_capacity(n);
    for k in big.ids() {
        let target = class_map
            .get(k)
            .ok_or_else(|| Error::IncompleteClassMap(k.to_string()))?;
        image.push(small.index_of(target)?);
    }
    for (i, j) in big.strict_pairs() {
        if !small.leq(image[i], image[j]) {
            return Err(Error::MapNotOrderPreserving {
                small: big.id(i).to_string(),
                large: big.id(j).to_string(),
            });
        }
    }
    let sb = MetricSpace::new(big)?;
    let ss = MetricSpace::new(small)?;
    let mut r = CheckReport::new("specialization");
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let db = sb.distance(i, j).clone();
            let ds = ss.distance(image[i], image[j]).clone();
            let relation = match ds.try_cmp(&db) {
                Some(core::cmp::Ordering::Less) => Relation::Strict,
                Some(core::cmp::Ordering::Equal) => Relation::Equal,
                Some(core::cmp::Ordering::Greater) => Relation::Violated,
                None => Relation::Undecided,
            };
            let line = format!("({}, {}): {} against {}", big.id(i), big.id(j), ds, db);
            match relation {
                Relation::Violated => r.fail(format!("distance grew {line}")),
                Relation::Strict => r.note(format!("strict decrease {line}")),
                _ => {}
            }
            out.push(Comparison {
                k: big.id(i).to_string(),
                l: big.id(j).to_string(),
                big: db,
                small: ds,
                relation,
            });
        }
    }
    Ok((r, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn s(text: &str) -> LaurentSeries {
        parse_series(text).unwrap()
    }

    fn sq(r: i64) -> SdcModel {
        let pd = s(&format!("({r}-t)/(1-{r}*t)"));
        SdcModel::builder("sq", "R")
            .class("R", LaurentSeries::one())
            .class("D", pd.clone())
            .order("D", "R")
            .dualizing("D")
            .ring_bass(pd)
            .build()
            .unwrap()
    }

    fn phi(bass: &str) -> HomomorphismDescriptor {
        HomomorphismDescriptor::new("phi", s(bass), "sq", "S")
    }

    #[test]
    fn injective_curvature() {
        let st = Settings::default();
        assert!(phi("t^3").injcurv(&st).unwrap().is_zero());
        assert!(phi("1+t+t^2").injcurv(&st).unwrap().is_zero());
        assert_eq!(
            phi("(3-t)/(1-3*t)").injcurv(&st).unwrap(),
            Curvature::from_integer(3)
        );
    }

    #[test]
    fn base_change_keeps_distances() {
        let m = sq(2);
        let b = base_change(&m, &phi("(3-t)/(1-3*t)")).unwrap();
        assert_eq!(b.ids().collect::<Vec<_>>(), ["DtensorS", "S"]);
        assert_eq!(b.top_id(), "S");
        assert_eq!(b.dualizing(), None);
        assert_eq!(
            crate::metric::distance(&b, "S", "DtensorS").unwrap(),
            Curvature::from_integer(2)
        );
        let g = base_change(&m, &phi("t^2")).unwrap();
        assert_eq!(g.dualizing_id(), Some("DtensorS"));
        assert!(g.validate().is_valid());
    }

    #[test]
    fn gorenstein_cobase_merges() {
        let m = sq(2);
        let p = phi("t^4");
        let c = cobase_change_model(&m, &p).unwrap();
        assert_eq!(c.model, base_change(&m, &p).unwrap());
        assert_eq!(c.dagger_id("D").unwrap(), "DtensorS");
    }

    #[test]
    fn cobase_family_structure() {
        let m = sq(2);
        let c = cobase_change_model(&m, &phi("(3-t)/(1-3*t)")).unwrap();
        let cm = &c.model;
        assert_eq!(
            cm.ids().collect::<Vec<_>>(),
            ["DtensorS", "S", "cbcD", "cbcR"]
        );
        assert_eq!(cm.dualizing_id(), Some("cbcD"));
        let idx = |x: &str| cm.index_of(x).unwrap();
        assert!(!cm.comparable(idx("DtensorS"), idx("cbcR")));
        assert!(cm.leq(idx("cbcD"), idx("S")));
        assert!(cm.leq(idx("cbcR"), idx("S")));
        assert!(!cm.leq(idx("S"), idx("cbcR")));
        assert!(cm.validate().is_valid(), "{}", cm.validate());
        let r = check_mixed_distance(&m, &c, &phi("(3-t)/(1-3*t)"), &[]);
        assert!(r.pass, "{r}");
    }

    #[test]
    fn collisions_are_errors() {
        let m = SdcModel::builder("m", "R")
            .class("R", LaurentSeries::one())
            .class("cbcD", s("1/(1-2*t)"))
            .class("DtensorS", s("1/(1-3*t)"))
            .order("cbcD", "R")
            .order("DtensorS", "R")
            .build()
            .unwrap();
        assert!(matches!(
            cobase_change_model(&m, &phi("1/(1-2*t)")),
            Err(Error::IdCollision(_))
        ));
    }

    #[test]
    fn specialization_map_checks() {
        let big = sq(2);
        let small = SdcModel::builder("p", "Rp")
            .class("Rp", LaurentSeries::one())
            .build()
            .unwrap();
        let map: BTreeMap<String, String> = [("R", "Rp"), ("D", "Rp")]
            .map(|(a, b)| (a.into(), b.into()))
            .into();
        let (r, cmp) = check_specialization(&big, &small, &map).unwrap();
        assert!(r.pass);
        assert_eq!(cmp[0].relation, Relation::Strict);

        let partial: BTreeMap<String, String> = [("R".into(), "Rp".into())].into();
        assert_eq!(
            check_specialization(&big, &small, &partial).unwrap_err(),
            Error::IncompleteClassMap("D".into())
        );
        let swap: BTreeMap<String, String> = [("R", "D"), ("D", "R")]
            .map(|(a, b)| (a.into(), b.into()))
            .into();
        assert!(matches!(
            check_specialization(&big, &big, &swap),
            Err(Error::MapNotOrderPreserving { .. })
        ));
    }
}
