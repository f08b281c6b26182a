//! The comparability graph, routes, and the curvature-weighted distance.
//!
//! The weight of an edge between comparable classes `K ⊴ L` is the curvature
//! of the hom series `P_K / P_L`. A route alternates up and down steps; since
//! every path in the comparability graph is a route of the same length and
//! the graph is finite, the distance is a shortest-path length.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curvature::{curvature, Curvature};
use crate::error::Error;
use crate::model::SdcModel;
use crate::report::{error_witness, CheckReport};
use crate::Settings;

/// Vertices `K0, L0, K1, L1, ..., K_n` with `K_j ⊴ L_j` and `K_{j+1} ⊴ L_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    vertices: Vec<String>,
}

impl Route {
    /// Needs an odd, nonzero number of vertices.
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self, Error> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.len().is_multiple_of(2) {
            return Err(Error::MalformedRoute(vertices.len()));
        }
        Ok(Route { vertices })
    }

    /// The route of no steps at `k`.
    pub fn trivial(k: impl Into<String>) -> Self {
        Route {
            vertices: vec![k.into()],
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn start(&self) -> &str {
        &self.vertices[0]
    }

    pub fn end(&self) -> &str {
        self.vertices.last().unwrap()
    }

    /// Number of up-down steps.
    pub fn steps(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn reverse(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Route { vertices }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Route) -> Option<Self> {
        if self.end() != other.start() {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices[1..].iter().cloned());
        Some(Route { vertices })
    }
}

/// Edge weight between `small ⊴ large`: curvature of the hom series.
pub fn sigma(model: &SdcModel, small: &str, large: &str) -> Result<Curvature, Error> {
    sigma_idx(model, model.index_of(small)?, model.index_of(large)?)
}

pub fn sigma_idx(model: &SdcModel, small: usize, large: usize) -> Result<Curvature, Error> {
    if small == large {
        return Ok(Curvature::zero());
    }
    let h = model.hom_series(large, small)?;
    curvature(&h, model.settings())
}

pub fn route_length(model: &SdcModel, route: &Route) -> Result<Curvature, Error> {
    let idx: Vec<usize> = route
        .vertices
        .iter()
        .map(|v| model.index_of(v))
        .collect::<Result<_, _>>()?;
    let mut total = Curvature::zero();
    for (step, w) in idx.windows(2).enumerate() {
        // even steps go up from K_j to L_j, odd steps come down from L_j
        let (small, large) = if step % 2 == 0 {
            (w[0], w[1])
        } else {
            (w[1], w[0])
        };
        if !model.leq(small, large) {
            return Err(Error::InvalidRoute {
                step,
                small: model.id(small).to_string(),
                large: model.id(large).to_string(),
            });
        }
        total = total + sigma_idx(model, small, large)?;
    }
    Ok(total)
}

/// Undirected comparability graph with curvature weights.
#[derive(Clone, Debug)]
pub struct ComparabilityGraph {
    ids: Vec<String>,
    /// Symmetric; `None` off the comparability relation and on the diagonal.
    weights: Vec<Vec<Option<Curvature>>>,
    /// Orientation of each edge, `(small, large)`.
    oriented: Vec<(usize, usize)>,
}

impl ComparabilityGraph {
    pub fn new(model: &SdcModel) -> Result<Self, Error> {
        let n = model.len();
        let mut weights = vec![vec![None; n]; n];
        let oriented = model.strict_pairs();
        for &(i, j) in &oriented {
            let w = sigma_idx(model, i, j)?;
            weights[i][j] = Some(w.clone());
            weights[j][i] = Some(w);
        }
        Ok(ComparabilityGraph {
            ids: model.ids().map(ToString::to_string).collect(),
            weights,
            oriented,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&Curvature> {
        self.weights[i][j].as_ref()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.oriented
    }

    /// Dijkstra from `src` on one endpoint of every weight; ties go to the
    /// smaller index, which is the lexicographically smaller id.
    fn dijkstra(
        &self,
        src: usize,
        bound: fn(&Curvature) -> &BigRational,
    ) -> (Vec<Option<BigRational>>, Vec<Option<usize>>) {
        let n = self.len();
        let mut dist: Vec<Option<BigRational>> = vec![None; n];
        let mut prev = vec![None; n];
        let mut done = vec![false; n];
        dist[src] = Some(BigRational::zero());
        loop {
            let mut best: Option<usize> = None;
            for v in 0..n {
                if done[v] || dist[v].is_none() {
                    continue;
                }
                if best.is_none_or(|b| dist[v] < dist[b]) {
                    best = Some(v);
                }
            }
            let Some(u) = best else { break };
            done[u] = true;
            let du = dist[u].clone().unwrap();
            for v in 0..n {
                if let Some(w) = &self.weights[u][v] {
                    let cand = &du + bound(w);
                    if dist[v].as_ref().is_none_or(|d| cand < *d) {
                        dist[v] = Some(cand);
                        prev[v] = Some(u);
                    }
                }
            }
        }
        (dist, prev)
    }

    /// Distances from `src` as enclosures (exact when every weight is).
    pub fn distances_from(&self, src: usize) -> Vec<Option<Curvature>> {
        let (lo, _) = self.dijkstra(src, Curvature::lo);
        let (hi, _) = self.dijkstra(src, Curvature::hi);
        lo.into_iter()
            .zip(hi)
            .map(|(l, h)| Some(Curvature::from_bounds(l?, h?)))
            .collect()
    }

    /// A shortest path from `src` to `dst` (by lower bounds), as vertex indices.
    pub fn shortest_path(&self, src: usize, dst: usize) -> Option<Vec<usize>> {
        let (dist, prev) = self.dijkstra(src, Curvature::lo);
        dist[dst].as_ref()?;
        let mut path = vec![dst];
        let mut v = dst;
        while let Some(p) = prev[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        Some(path)
    }
}

/// All-pairs distances of a model.
#[derive(Clone, Debug)]
pub struct MetricSpace {
    graph: ComparabilityGraph,
    dist: Vec<Vec<Curvature>>,
    settings: Settings,
}

impl MetricSpace {
    /// Fails if some edge weight cannot be computed or the graph is
    /// disconnected (which only happens when some class is not below top).
    pub fn new(model: &SdcModel) -> Result<Self, Error> {
        let graph = ComparabilityGraph::new(model)?;
        let mut dist = Vec::with_capacity(graph.len());
        for i in 0..graph.len() {
            let row = graph.distances_from(i);
            let row = row
                .into_iter()
                .enumerate()
                .map(|(j, d)| {
                    d.ok_or_else(|| Error::NotComparable {
                        small: model.id(j).to_string(),
                        large: model.top_id().to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            dist.push(row);
        }
        Ok(MetricSpace {
            graph,
            dist,
            settings: model.settings().clone(),
        })
    }

    pub fn graph(&self) -> &ComparabilityGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.graph.ids[i]
    }

    pub fn distance(&self, i: usize, j: usize) -> &Curvature {
        &self.dist[i][j]
    }

    pub fn table(&self) -> &[Vec<Curvature>] {
        &self.dist
    }

    pub fn diameter(&self) -> Curvature {
        self.dist
            .iter()
            .flatten()
            .fold(Curvature::zero(), |acc, d| acc.max(d))
    }

    /// The open ball, or the first class whose distance straddles `delta`.
    pub fn try_ball(&self, center: usize, delta: &BigRational) -> Result<Vec<usize>, usize> {
        let mut out = Vec::new();
        for (j, d) in self.dist[center].iter().enumerate() {
            match d.try_cmp_value(delta) {
                Some(Ordering::Less) => out.push(j),
                Some(_) => {}
                None => return Err(j),
            }
        }
        Ok(out)
    }

    /// A minimal-length route between two classes, with ties broken toward
    /// lexicographically smaller ids.
    pub fn shortest_route(&self, model: &SdcModel, i: usize, j: usize) -> Route {
        let path = self.graph.shortest_path(i, j).expect("connected graph");
        let name = |i: usize| model.id(i).to_string();
        let mut vertices = vec![name(path[0])];
        for w in path.windows(2) {
            let (u, v) = (w[0], w[1]);
            let at_peak = vertices.len() % 2 == 0;
            match (at_peak, model.leq(u, v)) {
                (false, true) | (true, false) => vertices.push(name(v)),
                (false, false) => vertices.extend([name(u), name(v)]),
                (true, true) => vertices.extend([name(u), name(v)]),
            }
        }
        if vertices.len().is_multiple_of(2) {
            vertices.push(vertices.last().unwrap().clone());
        }
        Route { vertices }
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }
}

pub fn distance(model: &SdcModel, k: &str, l: &str) -> Result<Curvature, Error> {
    let (i, j) = (model.index_of(k)?, model.index_of(l)?);
    let graph = ComparabilityGraph::new(model)?;
    graph.distances_from(i)[j]
        .clone()
        .ok_or_else(|| Error::NotComparable {
            small: l.to_string(),
            large: model.top_id().to_string(),
        })
}

pub fn diameter(model: &SdcModel) -> Result<Curvature, Error> {
    Ok(MetricSpace::new(model)?.diameter())
}

/// Tolerance used for the single refinement pass of an undecided comparison.
pub fn refined(settings: &Settings) -> Settings {
    Settings {
        n_check: settings.n_check,
        eps: &settings.eps / BigRational::from_integer(BigInt::from(1_000_000)),
    }
}

/// Ids of the classes at distance less than `delta` from `center`.
pub fn ball(model: &SdcModel, center: &str, delta: &BigRational) -> Result<Vec<String>, Error> {
    let c = model.index_of(center)?;
    let space = MetricSpace::new(model)?;
    let members = match space.try_ball(c, delta) {
        Ok(m) => m,
        Err(_) => {
            let fine = model.clone().with_settings(refined(model.settings()));
            let space = MetricSpace::new(&fine)?;
            space.try_ball(c, delta).map_err(|j| {
                Error::AmbiguousComparison(format!(
                    "distance from {} to {} is {} against radius {}",
                    center,
                    model.id(j),
                    space.distance(c, j),
                    delta
                ))
            })?
        }
    };
    Ok(members
        .into_iter()
        .map(|j| model.id(j).to_string())
        .collect())
}

fn space_or_fail(model: &SdcModel, report: &mut CheckReport) -> Option<MetricSpace> {
    match MetricSpace::new(model) {
        Ok(s) => Some(s),
        Err(e) => {
            report.fail(error_witness("distance table", &e));
            None
        }
    }
}

fn one() -> BigRational {
    BigRational::one()
}

/// Nonnegativity, identity of indiscernibles, symmetry, the triangle
/// inequality and the gap `dist ∈ {0} ∪ [1, ∞)`, over all pairs and triples.
pub fn check_metric_axioms(model: &SdcModel) -> CheckReport {
    let mut r = CheckReport::new("metric_axioms");
    let Some(s) = space_or_fail(model, &mut r) else {
        return r;
    };
    let n = s.len();
    for i in 0..n {
        for j in 0..n {
            let d = s.distance(i, j);
            if d.lo() < &BigRational::zero() {
                r.fail(format!(
                    "nonnegativity: dist({},{}) = {}",
                    s.id(i),
                    s.id(j),
                    d
                ));
            }
            if i == j && !d.is_zero() {
                r.fail(format!("identity: dist({},{}) = {}", s.id(i), s.id(j), d));
            }
            if i != j && d.is_zero() {
                r.fail(format!(
                    "identity: distinct {} and {} at distance 0",
                    s.id(i),
                    s.id(j)
                ));
            } else if i != j && d.hi() < &one() {
                r.fail(format!("gap: dist({},{}) = {} < 1", s.id(i), s.id(j), d));
            }
            if !d.possibly_eq(s.distance(j, i)) {
                r.fail(format!(
                    "symmetry: dist({},{}) = {} but dist({},{}) = {}",
                    s.id(i),
                    s.id(j),
                    d,
                    s.id(j),
                    s.id(i),
                    s.distance(j, i)
                ));
            }
            for k in 0..n {
                let via = s.distance(i, k) + s.distance(k, j);
                if !d.possibly_le(&via) {
                    r.fail(format!(
                        "triangle: dist({},{}) = {} > {} via {}",
                        s.id(i),
                        s.id(j),
                        d,
                        via,
                        s.id(k)
                    ));
                }
            }
        }
    }
    r
}

/// The direct edge is a shortest route between comparable classes.
pub fn check_direct_edge(model: &SdcModel) -> CheckReport {
    let mut r = CheckReport::new("direct_edge");
    let Some(s) = space_or_fail(model, &mut r) else {
        return r;
    };
    for (i, j) in model.strict_pairs() {
        let w = s.graph.weight(i, j).expect("comparable pairs have edges");
        let d = s.distance(i, j);
        let agrees = match (w.exact(), d.exact()) {
            (Some(a), Some(b)) => a == b,
            _ => w.possibly_eq(d),
        };
        r.require(agrees, || {
            format!(
                "{} below {}: sigma {} but distance {} via {:?}",
                s.id(i),
                s.id(j),
                w,
                d,
                s.shortest_route(model, i, j).vertices()
            )
        });
    }
    r
}

/// Distance bounds by curvatures of Poincaré series, by twice the injective
/// curvature of the ring, and by injective curvatures of the two classes.
pub fn check_bounds(model: &SdcModel) -> CheckReport {
    let mut r = CheckReport::new("bounds");
    let Some(s) = space_or_fail(model, &mut r) else {
        return r;
    };
    let n = s.len();
    let mut curv = Vec::with_capacity(n);
    for i in 0..n {
        match model.curv(i) {
            Ok(c) => curv.push(c),
            Err(e) => {
                r.fail(error_witness(&format!("curvature of {}", s.id(i)), &e));
                return r;
            }
        }
    }
    let ring = match model.ring_injcurv() {
        Some(Ok(c)) => Some(c.scale(2)),
        Some(Err(e)) => {
            r.fail(error_witness("ring Bass series", &e));
            None
        }
        None => None,
    };
    let inj: Option<Vec<Curvature>> = if model.dualizing().is_some() {
        (0..n)
            .map(|i| model.injcurv(i).and_then(Result::ok))
            .collect()
    } else {
        None
    };
    if model.dualizing().is_some() && inj.is_none() {
        r.note("injective curvatures unavailable; skipped that bound");
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = s.distance(i, j);
            let sum = &curv[i] + &curv[j];
            r.require(d.possibly_le(&sum), || {
                format!(
                    "dist({},{}) = {} > curvature sum {}",
                    s.id(i),
                    s.id(j),
                    d,
                    sum
                )
            });
            if let Some(bound) = &ring {
                r.require(d.possibly_le(bound) && sum.possibly_le(bound), || {
                    format!(
                        "dist({},{}) = {} or curvature sum {} exceeds {}",
                        s.id(i),
                        s.id(j),
                        d,
                        sum,
                        bound
                    )
                });
            }
            if let Some(inj) = &inj {
                let isum = &inj[i] + &inj[j];
                r.require(d.possibly_le(&isum), || {
                    format!(
                        "dist({},{}) = {} > injective curvature sum {}",
                        s.id(i),
                        s.id(j),
                        d,
                        isum
                    )
                });
            }
        }
    }
    r
}

/// The three conditions that are equivalent on any model of a local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trichotomy {
    pub noncomparable: Option<(String, String)>,
    pub at_least_three: bool,
    /// Center, radius and members of a ball that is neither a point nor everything.
    pub nontrivial_ball: Option<(String, BigRational, Vec<String>)>,
}

impl Trichotomy {
    pub fn flags(&self) -> (bool, bool, bool) {
        (
            self.noncomparable.is_some(),
            self.at_least_three,
            self.nontrivial_ball.is_some(),
        )
    }

    pub fn agree(&self) -> bool {
        let (a, b, c) = self.flags();
        a == b && b == c
    }
}

/// Radii to try around `center`: midpoints between consecutive groups of
/// distances, where overlapping enclosures form one group.
fn ball_radii(s: &MetricSpace, center: usize) -> Vec<BigRational> {
    let mut ds: Vec<&Curvature> = (0..s.len())
        .filter(|&j| j != center)
        .map(|j| s.distance(center, j))
        .collect();
    ds.sort_by(|a, b| a.lo().cmp(b.lo()));
    let mut groups: Vec<(BigRational, BigRational)> = Vec::new();
    for d in ds {
        match groups.last_mut() {
            Some((_, hi)) if d.lo() <= hi => {
                if d.hi() > hi {
                    *hi = d.hi().clone();
                }
            }
            _ => groups.push((d.lo().clone(), d.hi().clone())),
        }
    }
    let two = BigRational::from_integer(BigInt::from(2));
    groups
        .windows(2)
        .map(|w| (&w[0].1 + &w[1].0) / &two)
        .collect()
}

pub fn trichotomy(model: &SdcModel) -> Result<Trichotomy, Error> {
    let n = model.len();
    let mut noncomparable = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            if !model.comparable(i, j) {
                noncomparable = Some((model.id(i).to_string(), model.id(j).to_string()));
                break 'outer;
            }
        }
    }
    let s = MetricSpace::new(model)?;
    let mut nontrivial_ball = None;
    'centers: for c in 0..n {
        for delta in ball_radii(&s, c) {
            let members = s
                .try_ball(c, &delta)
                .expect("radii avoid every distance enclosure");
            if members.len() > 1 && members.len() < n {
                nontrivial_ball = Some((
                    model.id(c).to_string(),
                    delta,
                    members
                        .into_iter()
                        .map(|j| model.id(j).to_string())
                        .collect(),
                ));
                break 'centers;
            }
        }
    }
    Ok(Trichotomy {
        noncomparable,
        at_least_three: n >= 3,
        nontrivial_ball,
    })
}

pub fn check_trichotomy(model: &SdcModel) -> CheckReport {
    let mut r = CheckReport::new("trichotomy");
    match trichotomy(model) {
        Err(e) => r.fail(error_witness("trichotomy", &e)),
        Ok(t) => {
            let (a, b, c) = t.flags();
            let line = format!(
                "noncomparable pair: {a}, at least three classes: {b}, nontrivial ball: {c}"
            );
            if t.agree() {
                r.note(line);
            } else {
                r.fail(line);
            }
            if let Some((x, y)) = &t.noncomparable {
                r.note(format!("{x} and {y} are noncomparable"));
            }
            if let Some((center, delta, members)) = &t.nontrivial_ball {
                r.note(format!("B({center}, {delta}) = {{{}}}", members.join(", ")));
            }
        }
    }
    r
}

/// Consistency of each comparable pair `K ⊴ L` with the class `H` of the hom
/// complex from `L` to `K`, located by its Poincaré series: `L ⊴ H` forces
/// `L = K`, `H ⊴ L` forces `L = top`, and below top `H` and `L` are
/// noncomparable. A pair is flagged when no candidate `H` satisfies this,
/// including when no class has the right series.
pub fn check_corollary_fixed(model: &SdcModel) -> CheckReport {
    let mut r = CheckReport::new("corollary_fixed");
    let top = model.top();
    for (k, l) in model.strict_pairs() {
        let q = match model.poincare(k).checked_div(model.poincare(l)) {
            Ok(q) => q,
            Err(e) => {
                r.fail(error_witness(
                    &format!("{} below {}", model.id(k), model.id(l)),
                    &e,
                ));
                continue;
            }
        };
        let candidates: Vec<usize> = (0..model.len())
            .filter(|&h| model.poincare(h).eq_up_to_shift(&q))
            .collect();
        if candidates.is_empty() {
            r.fail(format!(
                "{} below {}: no class has the hom series {}",
                model.id(k),
                model.id(l),
                q
            ));
            continue;
        }
        let consistent = |h: usize| {
            if model.leq(l, h) && l != k {
                return false;
            }
            if model.leq(h, l) && l != top {
                return false;
            }
            l == top || !model.comparable(h, l)
        };
        if !candidates.iter().any(|&h| consistent(h)) {
            let names: Vec<&str> = candidates.iter().map(|&h| model.id(h)).collect();
            r.fail(format!(
                "{} below {}: hom class {} is comparable with {}",
                model.id(k),
                model.id(l),
                names.join(" or "),
                model.id(l)
            ));
        }
    }
    r
}

fn dot_quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Graphviz digraph of the covering relations, `small -> large`, labeled by
/// the edge weight.
pub fn emit_dot(model: &SdcModel) -> Result<String, Error> {
    let mut out = format!("digraph {} {{\n", dot_quote(model.name()));
    for id in model.ids() {
        out.push_str(&format!("  {};\n", dot_quote(id)));
    }
    for (i, j) in model.covers() {
        let w = sigma_idx(model, i, j)?;
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            dot_quote(model.id(i)),
            dot_quote(model.id(j)),
            dot_quote(&w.to_string())
        ));
    }
    out.push_str("}\n");
    Ok(out)
}
