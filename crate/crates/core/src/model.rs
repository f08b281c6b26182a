//! Finite models of the set of semidualizing classes of a local ring.
//!
//! A model lists classes with their Poincaré series (and optionally Bass
//! series), the reflexivity order between them, the class of the ring itself
//! (`top`) and optionally a dualizing class. The order is whatever the user
//! asserts; [`SdcModel::validate`] checks the necessary numerical conditions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::{curvature, Curvature};
use crate::error::Error;
use crate::report::{error_witness, CheckReport, ValidationReport};
use crate::series::LaurentSeries;
use crate::Settings;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdcClass {
    pub id: String,
    /// Poincaré series of a representative complex.
    pub poincare: LaurentSeries,
    /// Bass series, when given explicitly.
    pub bass: Option<LaurentSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdcModel {
    name: String,
    /// Sorted by id; indices into this vector name classes internally.
    classes: Vec<SdcClass>,
    /// `order[i][j]` iff class `i` is below class `j`; reflexive and transitively closed.
    order: Vec<Vec<bool>>,
    top: usize,
    dualizing: Option<usize>,
    ring_bass: Option<LaurentSeries>,
    settings: Settings,
}

/// Collects classes and order pairs by id; [`ModelBuilder::build`] resolves them.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    name: String,
    top: String,
    classes: Vec<SdcClass>,
    pairs: Vec<(String, String)>,
    dualizing: Option<String>,
    ring_bass: Option<LaurentSeries>,
    settings: Settings,
}

impl ModelBuilder {
    pub fn class(self, id: impl Into<String>, poincare: LaurentSeries) -> Self {
        self.class_with_bass(id, poincare, None)
    }

    pub fn class_with_bass(
        mut self,
        id: impl Into<String>,
        poincare: LaurentSeries,
        bass: Option<LaurentSeries>,
    ) -> Self {
        self.classes.push(SdcClass {
            id: id.into(),
            poincare,
            bass,
        });
        self
    }

    /// Asserts `small` ⊴ `large`.
    pub fn order(mut self, small: impl Into<String>, large: impl Into<String>) -> Self {
        self.pairs.push((small.into(), large.into()));
        self
    }

    pub fn dualizing(mut self, id: impl Into<String>) -> Self {
        self.dualizing = Some(id.into());
        self
    }

    pub fn ring_bass(mut self, series: LaurentSeries) -> Self {
        self.ring_bass = Some(series);
        self
    }

    pub fn settings(mut self, settings: Settings) -> Self {
        self.settings = settings;
        self
    }

    /// Resolves ids and closes the order reflexively and transitively.
    ///
    /// Fails only on structural problems (duplicate or unknown ids); the
    /// mathematical invariants are left to [`SdcModel::validate`].
    pub fn build(self) -> Result<SdcModel, Error> {
        let mut classes = self.classes;
        classes.sort_by(|a, b| a.id.cmp(&b.id));
        for w in classes.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateClass(w[0].id.clone()));
            }
        }
        let find = |id: &str| {
            classes
                .binary_search_by(|c| c.id.as_str().cmp(id))
                .map_err(|_| Error::UnknownClass(id.to_string()))
        };
        let n = classes.len();
        let mut order = vec![vec![false; n]; n];
        for (small, large) in &self.pairs {
            order[find(small)?][find(large)?] = true;
        }
        close_order(&mut order);
        let top = find(&self.top)?;
        let dualizing = self.dualizing.as_deref().map(find).transpose()?;
        Ok(SdcModel {
            name: self.name,
            classes,
            order,
            top,
            dualizing,
            ring_bass: self.ring_bass,
            settings: self.settings,
        })
    }
}

/// Reflexive-transitive closure of a square relation, in place.
pub fn close_order(rel: &mut [Vec<bool>]) {
    let n = rel.len();
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                let via = rel[k].clone();
                for (x, &y) in rel[i].iter_mut().zip(&via) {
                    *x |= y;
                }
            }
        }
    }
}

impl SdcModel {
    pub fn builder(name: impl Into<String>, top: impl Into<String>) -> ModelBuilder {
        ModelBuilder {
            name: name.into(),
            top: top.into(),
            classes: Vec::new(),
            pairs: Vec::new(),
            dualizing: None,
            ring_bass: None,
            settings: Settings::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn with_settings(mut self, settings: Settings) -> Self {
        self.settings = settings;
        self
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[SdcClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &SdcClass {
        &self.classes[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.classes[i].id
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.id.as_str())
    }

    pub fn index_of(&self, id: &str) -> Result<usize, Error> {
        self.classes
            .binary_search_by(|c| c.id.as_str().cmp(id))
            .map_err(|_| Error::UnknownClass(id.to_string()))
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn top_id(&self) -> &str {
        self.id(self.top)
    }

    pub fn dualizing(&self) -> Option<usize> {
        self.dualizing
    }

    pub fn dualizing_id(&self) -> Option<&str> {
        self.dualizing.map(|d| self.id(d))
    }

    pub fn ring_bass(&self) -> Option<&LaurentSeries> {
        self.ring_bass.as_ref()
    }

    pub fn poincare(&self, i: usize) -> &LaurentSeries {
        &self.classes[i].poincare
    }

    /// `i` ⊴ `j` in the closed order.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order[i][j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.order[i][j] || self.order[j][i]
    }

    pub fn order_matrix(&self) -> &[Vec<bool>] {
        &self.order
    }

    /// All pairs `(small, large)` with `small` ⊴ `large` and `small != large`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.order[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Covering pairs of the order (its transitive reduction), ignoring any
    /// cycles an invalid model might contain.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_pairs()
            .into_iter()
            .filter(|&(i, j)| {
                !(0..n).any(|k| {
                    k != i
                        && k != j
                        && self.order[i][k]
                        && self.order[k][j]
                        && !(self.order[k][i] || self.order[j][k])
                })
            })
            .collect()
    }

    /// Bass series of class `i`: the explicit one, else `ring_bass / P_i`.
    pub fn bass(&self, i: usize) -> Option<LaurentSeries> {
        if let Some(b) = &self.classes[i].bass {
            return Some(b.clone());
        }
        let rb = self.ring_bass.as_ref()?;
        rb.checked_div(self.poincare(i)).ok()
    }

    /// Series of the hom complex from `large` to `small`: `P_small / P_large`,
    /// certified nonnegative.
    pub fn hom_series(&self, large: usize, small: usize) -> Result<LaurentSeries, Error> {
        if !self.order[small][large] {
            return Err(Error::NotComparable {
                small: self.id(small).to_string(),
                large: self.id(large).to_string(),
            });
        }
        self.poincare(small)
            .checked_div(self.poincare(large))?
            .certify_nonneg(self.settings.n_check)
    }

    pub fn hom_series_by_id(&self, large: &str, small: &str) -> Result<LaurentSeries, Error> {
        self.hom_series(self.index_of(large)?, self.index_of(small)?)
    }

    pub fn curv(&self, i: usize) -> Result<Curvature, Error> {
        curvature(self.poincare(i), &self.settings)
    }

    /// Injective curvature of class `i`, when its Bass series is known.
    pub fn injcurv(&self, i: usize) -> Option<Result<Curvature, Error>> {
        self.bass(i).map(|b| curvature(&b, &self.settings))
    }

    pub fn ring_injcurv(&self) -> Option<Result<Curvature, Error>> {
        self.ring_bass
            .as_ref()
            .map(|b| curvature(b, &self.settings))
    }

    /// Dualizing class equals top; without a dualizing class, the ring Bass
    /// series has curvature zero; with neither, the model is a single class.
    pub fn is_gorenstein(&self) -> bool {
        if let Some(d) = self.dualizing {
            return d == self.top;
        }
        if let Some(r) = self.ring_injcurv() {
            return r.is_ok_and(|c| c.is_zero());
        }
        self.len() == 1
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let nc = self.settings.n_check;
        let mut entries = Vec::new();

        let mut e = CheckReport::new("poincare_nonneg");
        for c in &self.classes {
            if let Some((k, v)) = c.poincare.first_nonneg_violation(nc) {
                e.fail(format!(
                    "{}: coefficient {} at t^{}",
                    c.id,
                    v,
                    c.poincare.shift() + k as i64
                ));
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("bass_nonneg");
        if let Some(rb) = &self.ring_bass {
            if let Some((k, v)) = rb.first_nonneg_violation(nc) {
                e.fail(format!(
                    "ring: coefficient {} at t^{}",
                    v,
                    rb.shift() + k as i64
                ));
            }
        }
        for i in 0..n {
            if let Some(b) = self.bass(i) {
                if let Some((k, v)) = b.first_nonneg_violation(nc) {
                    e.fail(format!(
                        "{}: coefficient {} at t^{}",
                        self.id(i),
                        v,
                        b.shift() + k as i64
                    ));
                }
            }
        }
        entries.push(e);

        // P_K * I_K is the ring's own Bass series, the same for every K
        let mut e = CheckReport::new("bass_identity");
        let mut reference = self.ring_bass.clone().map(|s| ("ring".to_string(), s));
        for c in &self.classes {
            if let Some(b) = &c.bass {
                let prod = &c.poincare * b;
                match &reference {
                    None => reference = Some((c.id.clone(), prod)),
                    Some((who, r)) => {
                        if !prod.eq_up_to_shift(r) {
                            e.fail(format!(
                                "{}: poincare*bass = {} differs from {} series {}",
                                c.id, prod, who, r
                            ));
                        }
                    }
                }
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("order_antisymmetric");
        for i in 0..n {
            for j in i + 1..n {
                if self.order[i][j] && self.order[j][i] {
                    e.fail(format!(
                        "{} and {} are below each other",
                        self.id(i),
                        self.id(j)
                    ));
                }
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("top_is_maximum");
        for i in 0..n {
            if !self.order[i][self.top] {
                e.fail(format!("{} is not below {}", self.id(i), self.top_id()));
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("top_poincare_one");
        let pt = self.poincare(self.top);
        e.require(pt.eq_up_to_shift(&LaurentSeries::one()), || {
            format!("{} has poincare {}", self.top_id(), pt)
        });
        entries.push(e);

        let mut e = CheckReport::new("dualizing_is_minimum");
        match self.dualizing {
            None => e.note("no dualizing class"),
            Some(d) => {
                for i in 0..n {
                    if !self.order[d][i] {
                        e.fail(format!("{} is not below {}", self.id(d), self.id(i)));
                    }
                }
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("hom_series_nonneg");
        for (i, j) in self.strict_pairs() {
            match self.poincare(i).checked_div(self.poincare(j)) {
                Err(err) => e.fail(error_witness(
                    &format!("{} below {}", self.id(i), self.id(j)),
                    &err,
                )),
                Ok(q) => {
                    if let Some((k, v)) = q.first_nonneg_violation(nc) {
                        e.fail(format!(
                            "{} below {}: hom series {} has coefficient {} at t^{}",
                            self.id(i),
                            self.id(j),
                            q,
                            v,
                            q.shift() + k as i64
                        ));
                    }
                }
            }
        }
        entries.push(e);

        let curvs: Vec<Option<Curvature>> = (0..n).map(|i| self.curv(i).ok()).collect();

        let mut e = CheckReport::new("curvature_bounded_by_ring_bass");
        match self.ring_injcurv() {
            None => e.note("no ring Bass series"),
            Some(Err(err)) => e.fail(error_witness("ring Bass series", &err)),
            Some(Ok(rc)) => {
                for (i, c) in curvs.iter().enumerate() {
                    if let Some(c) = c {
                        e.require(c.possibly_le(&rc), || {
                            format!("{}: curvature {} exceeds {}", self.id(i), c, rc)
                        });
                    }
                }
            }
        }
        entries.push(e);

        let mut e = CheckReport::new("zero_curvature_iff_top");
        for (i, c) in curvs.iter().enumerate() {
            match c {
                None => e.fail(format!("{}: curvature undefined", self.id(i))),
                Some(c) => {
                    if c.is_zero() != (i == self.top) {
                        e.fail(format!("{}: curvature {}", self.id(i), c));
                    }
                }
            }
        }
        entries.push(e);

        ValidationReport {
            model: self.name.clone(),
            entries,
        }
    }
}
