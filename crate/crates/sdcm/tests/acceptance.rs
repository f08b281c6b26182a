//! End-to-end acceptance run. Prints one line per criterion and exits nonzero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdcm::format::{load_model, load_phi};
use sdcm_core::change::Relation;
use sdcm_core::examples::{
    decreasing_equal, decreasing_strict, geometric_product, iterated_model, square_zero_model,
    trivial_extension_phi,
};
use sdcm_core::metric::{
    check_corollary_fixed, check_direct_edge, check_metric_axioms, trichotomy,
};
use sdcm_core::{
    base_change, build_dagger, check_fixed_points, check_isometry, check_mixed_distance,
    check_specialization, cobase_change_model, curvature, curvature_estimate, diameter, distance,
    metric, BigInt, BigRational, Curvature, HomomorphismDescriptor, IntPolynomial, LaurentSeries,
    MetricSpace, SdcModel, Settings,
};

type Outcome = Result<String, String>;

fn int(n: i64) -> Curvature {
    Curvature::from_integer(n)
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_models() -> Result<Vec<SdcModel>, String> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .map_err(|e| format!("corpus: {e}"))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().unwrap().to_string_lossy();
            name.ends_with(".json") && !name.starts_with("phi_")
        })
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| load_model(p, Settings::default()).map_err(|e| e.to_string()))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn dist(m: &SdcModel, k: &str, l: &str) -> Result<Curvature, String> {
    distance(m, k, l).map_err(|e| format!("{}: dist({k},{l}): {e}", m.name()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for r in [2, 3, 5] {
        let m = square_zero_model(r);
        let d = dist(&m, "R", "D")?;
        ensure(d == int(r), || format!("r = {r}: dist(R, D) = {d}"))?;
        let diam = diameter(&m).map_err(|e| e.to_string())?;
        ensure(diam == int(r), || format!("r = {r}: diameter {diam}"))?;
    }
    within(Duration::from_secs(1), start)?;
    Ok("r = 2, 3, 5".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for r in 2..=4 {
        for s in 2..=4 {
            let m = iterated_model(r, s);
            let expected = [
                ("S", "DtensorS", r),
                ("S", "cbcR", s),
                ("S", "cbcD", r.max(s)),
                ("DtensorS", "cbcD", s),
                ("cbcR", "cbcD", r),
                ("cbcR", "DtensorS", r + s),
            ];
            for (k, l, want) in expected {
                let d = dist(&m, k, l)?;
                ensure(d == int(want), || {
                    format!("({r},{s}): dist({k},{l}) = {d}, expected {want}")
                })?;
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok("(r,s) in {2,3,4}^2".into())
}

fn criterion_3() -> Outcome {
    let m = iterated_model(2, 3);
    let delta = BigRational::from_integer(BigInt::from(3));
    let ball = metric::ball(&m, "cbcR", &delta).map_err(|e| e.to_string())?;
    ensure(ball == ["cbcD", "cbcR"], || format!("ball = {ball:?}"))?;
    Ok("B(cbcR, 3) = {cbcR, cbcD}".into())
}

/// A random valid model: classes labeled by multisets of factors `1/(1 - c t)`,
/// `K ⊴ L` allowed only when the label of `L` is contained in that of `K`, so
/// every hom series is again a product of geometric series.
fn random_model(rng: &mut ChaCha8Rng, idx: usize) -> SdcModel {
    let n = rng.gen_range(1..=8);
    let mut labels: Vec<Vec<i64>> = vec![Vec::new()];
    while labels.len() < n {
        let size = rng.gen_range(1..=3);
        let mut l: Vec<i64> = (0..size).map(|_| rng.gen_range(1..=5)).collect();
        l.sort();
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let id = |i: usize| format!("K{i}");
    let mut b = SdcModel::builder(format!("random_{idx}"), id(0));
    for (i, l) in labels.iter().enumerate() {
        let shift = if i == 0 { 0 } else { rng.gen_range(-2..=2) };
        b = b.class(id(i), geometric_product(l).shifted(shift));
    }
    for i in 1..n {
        b = b.order(id(i), id(0));
        for j in 1..n {
            if i != j && contains(&labels[i], &labels[j]) && rng.gen_bool(0.5) {
                b = b.order(id(i), id(j));
            }
        }
    }
    b.build().expect("generated ids are distinct")
}

fn contains(big: &[i64], small: &[i64]) -> bool {
    let mut rest = big.to_vec();
    for c in small {
        match rest.iter().position(|x| x == c) {
            Some(p) => {
                rest.remove(p);
            }
            None => return false,
        }
    }
    true
}

fn random_corpus() -> Vec<SdcModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5dc0);
    (0..500).map(|i| random_model(&mut rng, i)).collect()
}

fn criterion_4(models: &[SdcModel]) -> Outcome {
    let start = Instant::now();
    for m in models {
        let v = m.validate();
        ensure(v.is_valid(), || {
            format!("generator produced an invalid model:\n{v}")
        })?;
        let r = check_metric_axioms(m);
        ensure(r.pass, || format!("{}: {r}", m.name()))?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} models", models.len()))
}

fn criterion_5(models: &[SdcModel]) -> Outcome {
    let mut edges = 0;
    for m in models {
        let s = MetricSpace::new(m).map_err(|e| e.to_string())?;
        for (i, j) in m.strict_pairs() {
            let sigma = metric::sigma_idx(m, i, j).map_err(|e| e.to_string())?;
            ensure(s.distance(i, j) == &sigma, || {
                format!(
                    "{}: dist({},{}) = {} but sigma = {sigma}",
                    m.name(),
                    m.id(i),
                    m.id(j),
                    s.distance(i, j)
                )
            })?;
            edges += 1;
        }
        let r = check_direct_edge(m);
        ensure(r.pass, || format!("{}: {r}", m.name()))?;
    }
    Ok(format!("{edges} comparable pairs"))
}

/// Every model on at most four classes whose non-top labels are distinct
/// multisets of size one or two over {1, 2, 3}, with every choice of relation
/// between non-top classes. Kept when it validates and each comparable pair
/// has a consistent hom class.
fn criterion_6() -> Outcome {
    let mut pool: Vec<Vec<i64>> = Vec::new();
    for a in 1..=3 {
        pool.push(vec![a]);
        for b in a..=3 {
            pool.push(vec![a, b]);
        }
    }
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
    for size in 1..=3 {
        let mut cur = Vec::new();
        choose(pool.len(), size, 0, &mut cur, &mut subsets);
    }
    let (mut total, mut kept, mut with_three) = (0usize, 0usize, 0usize);
    for sub in &subsets {
        let k = sub.len();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        for code in 0..3usize.pow(pairs.len() as u32) {
            total += 1;
            let mut b =
                SdcModel::builder(format!("grid_{total}"), "T").class("T", LaurentSeries::one());
            for (x, &li) in sub.iter().enumerate() {
                b = b
                    .class(format!("C{x}"), geometric_product(&pool[li]))
                    .order(format!("C{x}"), "T");
            }
            let mut c = code;
            for &(i, j) in &pairs {
                match c % 3 {
                    1 => b = b.order(format!("C{i}"), format!("C{j}")),
                    2 => b = b.order(format!("C{j}"), format!("C{i}")),
                    _ => {}
                }
                c /= 3;
            }
            let m = b.build().map_err(|e| e.to_string())?;
            if !m.validate().is_valid() || !check_corollary_fixed(&m).pass {
                continue;
            }
            kept += 1;
            if m.len() >= 3 {
                with_three += 1;
            }
            let t = trichotomy(&m).map_err(|e| e.to_string())?;
            ensure(t.agree(), || {
                format!("{}: conditions disagree {:?}", m.name(), t.flags())
            })?;
        }
    }
    ensure(with_three > 0, || {
        "grid has no model with three classes".into()
    })?;
    Ok(format!(
        "{kept} valid of {total} grid models, {with_three} with at least three classes"
    ))
}

fn choose(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..n {
        cur.push(i);
        choose(n, k, i + 1, cur, out);
        cur.pop();
    }
}

fn poly(coeffs: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(coeffs)
}

/// Nonnegative series `t^d p / q`: `p` has positive coefficients and `q` is a
/// product of denominators with nonnegative expansions, some with irrational
/// dominant roots.
fn random_series(rng: &mut ChaCha8Rng) -> LaurentSeries {
    let num: Vec<i64> = (0..rng.gen_range(1..=3))
        .map(|_| rng.gen_range(1..=3))
        .collect();
    let mut den = poly(&[1]);
    for _ in 0..rng.gen_range(0..=3) {
        let f = match rng.gen_range(0..4) {
            0 => poly(&[1, -1, -1]),
            1 => poly(&[1, 0, -2]),
            2 => poly(&[1, -1, 0, -1]),
            _ => poly(&[1, -rng.gen_range(1..=5)]),
        };
        den = &den * &f;
    }
    LaurentSeries::new(rng.gen_range(-3..=3), poly(&num), den).expect("nonzero denominator")
}

fn criterion_7() -> Outcome {
    let st = Settings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let curv = |a: &LaurentSeries| curvature(a, &st).map_err(|e| format!("curv({a}): {e}"));
    let mut exact_products = 0;
    for _ in 0..1000 {
        let f = random_series(&mut rng);
        let g = random_series(&mut rng);
        let (cf, cg) = (curv(&f)?, curv(&g)?);

        let d = rng.gen_range(-5..=5);
        let shifted = curv(&f.shifted(d))?;
        ensure(shifted == cf, || {
            format!("curv(t^{d} * {f}) = {shifted} but curv = {cf}")
        })?;

        let cfg = curv(&(&f * &g))?;
        let max = cf.max(&cg);
        if cf.is_exact() && cg.is_exact() {
            exact_products += 1;
            ensure(cfg == max, || format!("curv({f} * {g}) = {cfg}, max {max}"))?;
        } else {
            ensure(cfg.possibly_eq(&max), || {
                format!("curv({f} * {g}) = {cfg}, max {max}")
            })?;
        }

        // f ≼ f + g, and f ≼ f * (1 + g) when g has no negative powers
        let sum = &f + &g;
        let cs = curv(&sum)?;
        ensure(cf.possibly_le(&cs), || {
            format!("curv({f}) = {cf} > curv({sum}) = {cs}")
        })?;
        let g0 = g.shifted(-g.shift().min(0));
        let bigger = &f * &(&LaurentSeries::one() + &g0);
        let cb = curv(&bigger)?;
        ensure(cf.possibly_le(&cb), || {
            format!("curv({f}) = {cf} > curv({bigger}) = {cb}")
        })?;
    }
    Ok(format!(
        "1000 pairs, {exact_products} with exact curvatures"
    ))
}

fn criterion_8(models: &[SdcModel]) -> Outcome {
    let five_percent = BigRational::new(BigInt::from(1), BigInt::from(20));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut checked = 0;
    for m in models {
        let mut series: Vec<(String, LaurentSeries)> = Vec::new();
        for i in 0..m.len() {
            series.push((format!("P_{}", m.id(i)), m.poincare(i).clone()));
            if let Some(b) = m.bass(i) {
                series.push((format!("I_{}", m.id(i)), b));
            }
        }
        if let Some(rb) = m.ring_bass() {
            series.push(("ring bass".into(), rb.clone()));
        }
        for (what, a) in series {
            let c = curvature(&a, m.settings()).map_err(|e| e.to_string())?;
            let est = curvature_estimate(&a, 200);
            let tol = &five_percent * c.hi().max(&one);
            for end in [c.lo(), c.hi()] {
                let err = if *end > est { end - &est } else { &est - end };
                ensure(err <= tol, || {
                    format!("{}: {what}: curvature {c} but estimate {est}", m.name())
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} series over {} models", models.len()))
}

fn criterion_9(corpus: &[SdcModel]) -> Outcome {
    let mut closed = 0;
    let mut models = vec![iterated_model(2, 3)];
    models.extend(corpus.iter().cloned());
    for (n, m) in models.iter().enumerate() {
        let d = match build_dagger(m) {
            Ok(d) => d,
            Err(e) => {
                ensure(n > 0, || format!("iterated_2_3 is not duality-closed: {e}"))?;
                continue;
            }
        };
        closed += 1;
        let iso = check_isometry(m, &d);
        ensure(iso.pass, || format!("{}: {iso}", m.name()))?;
        let fixed = check_fixed_points(m, &d);
        ensure(fixed.pass, || format!("{}: {fixed}", m.name()))?;
        if !m.is_gorenstein() {
            ensure(d.fixed_points().is_empty(), || {
                format!("{}: fixed points {:?}", m.name(), d.fixed_points())
            })?;
            ensure(m.len() % 2 == 0, || {
                format!("{}: odd cardinality", m.name())
            })?;
        }
    }
    Ok(format!("{closed} duality-closed models"))
}

fn criterion_10(corpus: &[SdcModel]) -> Outcome {
    let sources: Vec<SdcModel> = corpus
        .iter()
        .filter(|m| m.name().starts_with("square0_") || m.name().starts_with("iterated_"))
        .cloned()
        .collect();
    ensure(!sources.is_empty(), || "no corpus sources".into())?;
    let mut maps: Vec<HomomorphismDescriptor> = Vec::new();
    for entry in std::fs::read_dir(corpus_dir()).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        if p.file_name().unwrap().to_string_lossy().starts_with("phi_") {
            maps.push(load_phi(&p).map_err(|e| e.to_string())?);
        }
    }
    maps.sort_by(|a, b| a.name.cmp(&b.name));
    for d in 0..=3 {
        maps.push(HomomorphismDescriptor::new(
            format!("gorenstein_{d}"),
            LaurentSeries::monomial(d),
            "",
            "T",
        ));
    }
    maps.push(trivial_extension_phi("", 5));
    let mut runs = 0;
    for src in &sources {
        let st = src.settings();
        let table = MetricSpace::new(src).map_err(|e| e.to_string())?;
        for phi in &maps {
            // a target named like a source class would collide with it
            let mut phi = phi.clone();
            if phi.source != src.name() {
                phi.target_name = "T".into();
            }
            let phi = &phi;
            let image = base_change(src, phi).map_err(|e| e.to_string())?;
            for i in 0..src.len() {
                for j in 0..src.len() {
                    let d = dist(&image, &phi.base_id(src, i), &phi.base_id(src, j))?;
                    ensure(&d == table.distance(i, j), || {
                        format!(
                            "{} along {}: base change moved dist({},{}) from {} to {d}",
                            src.name(),
                            phi.name,
                            src.id(i),
                            src.id(j),
                            table.distance(i, j)
                        )
                    })?;
                }
            }

            let inj = phi.injcurv(st).map_err(|e| e.to_string())?;
            let cobase = cobase_change_model(src, phi).map_err(|e| e.to_string())?;
            for k in src.ids() {
                let a = cobase.dagger_id(k).map_err(|e| e.to_string())?;
                let b = cobase.base_id(k).map_err(|e| e.to_string())?;
                let d = dist(&cobase.model, a, b)?;
                ensure(d == inj, || {
                    format!(
                        "{} along {}: dist({a},{b}) = {d}, injcurv {inj}",
                        src.name(),
                        phi.name
                    )
                })?;
            }
            let mixed = check_mixed_distance(src, &cobase, phi, &[]);
            ensure(mixed.pass, || {
                format!("{} along {}: {mixed}", src.name(), phi.name)
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} source and map combinations"))
}

fn criterion_11() -> Outcome {
    let strict = decreasing_strict();
    let (report, cmp) = check_specialization(&strict.big, &strict.small, &strict.class_map)
        .map_err(|e| e.to_string())?;
    ensure(report.pass, || report.to_string())?;
    let c = cmp
        .iter()
        .find(|c| c.k == "D" && c.l == "R")
        .ok_or("no comparison of D and R")?;
    ensure(
        c.relation == Relation::Strict && c.small == int(0) && c.big == int(2),
        || format!("strict case: {c:?}"),
    )?;

    let equal = decreasing_equal();
    let (report, cmp) = check_specialization(&equal.big, &equal.small, &equal.class_map)
        .map_err(|e| e.to_string())?;
    ensure(report.pass, || report.to_string())?;
    let c = cmp
        .iter()
        .find(|c| c.k == "E" && c.l == "S")
        .ok_or("no comparison of E and S")?;
    ensure(
        c.relation == Relation::Equal && c.small == int(2) && c.big == int(2),
        || format!("equal case: {c:?}"),
    )?;
    Ok("0 < 2 and 2 = 2".into())
}

fn main() {
    let corpus = corpus_models();
    let random = random_corpus();
    let with_corpus = |f: fn(&[SdcModel]) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(e.clone()),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("square-zero distance and diameter", criterion_1()),
        ("iterated distance tables", criterion_2()),
        ("ball witness", criterion_3()),
        ("metric axioms on random models", criterion_4(&random)),
        (
            "distance equals sigma on comparable pairs",
            criterion_5(&random),
        ),
        ("trichotomy on the model grid", criterion_6()),
        ("curvature laws", criterion_7()),
        (
            "curvature agrees with the estimate",
            with_corpus(criterion_8),
        ),
        ("dagger isometry and fixed points", with_corpus(criterion_9)),
        ("change of rings", with_corpus(criterion_10)),
        ("specialization examples", criterion_11()),
    ];
    let mut failed = BTreeSet::new();
    for (n, (title, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} pass  {title} ({detail})", n + 1),
            Err(why) => {
                failed.insert(n + 1);
                println!("criterion {:>2} FAIL  {title}: {why}", n + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria pass", results.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
