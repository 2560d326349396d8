//! Side-by-side comparison of two manifolds through a candidate
//! profinite isomorphism.

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use fibered_core::cones::{cone_correspondence, norm_cones, thurston_norm, thurston_norm_int, Correspondence, CorrespondenceFailure, NormBall};
use fibered_core::dynamics::{fried_cone, nielsen_numbers, stretch_estimate, OrbitTable, TransitionGraph};
use fibered_core::exact::{LaurentPoly, RatMatrix};
use fibered_core::fibered::{twisted_homology, FiberedPresentation};
use fibered_core::group::FiniteGroup;
use fibered_core::profinite::{dual_specialize, ideal_equal, mc_module, rank_one_factor, specialize, SymbolicProfiniteMap, TruncatedProfiniteInt};
use fibered_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::model::*;
use crate::InputError;

pub const CHECKS: &[&str] = &["fried_duality", "mc", "nielsen", "norm_cones", "norm_values", "torsion"];

pub const DEFAULT_LADDER: &[(u64, u64)] = &[(2, 1), (2, 2), (3, 1), (3, 2), (3, 4), (5, 1), (5, 4), (7, 3)];

const SCOPE: &str = "pass = consistent with a correspondence at this precision; not a proof of isomorphism";

/// Depth for the primitive cycle enumeration behind `fried_duality`.
const FRIED_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Input that makes `fibered <subcommand> <args…>` exit with status 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub subcommand: String,
    #[serde(default)]
    pub args: Vec<String>,
    pub input: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub verdict: Verdict,
    pub detail: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn new(check: &str, verdict: Verdict, detail: Value) -> Self {
        CheckResult { check: check.into(), verdict, detail, witness: None }
    }

    fn skipped(check: &str, reason: &str) -> Self {
        Self::new(check, Verdict::Skipped, json!({ "reason": reason }))
    }

    fn with_witness(mut self, subcommand: &str, args: Vec<String>, input: Value) -> Self {
        self.witness = Some(Witness { subcommand: subcommand.into(), args, input });
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatteryReport {
    pub pair: String,
    /// A pass means consistency with a correspondence at the tested precision, nothing more.
    pub scope: String,
    pub checks: Vec<CheckResult>,
}

impl BatteryReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.check.as_str()).collect()
    }

    pub fn verdict(&self, check: &str) -> Option<Verdict> {
        self.checks.iter().find(|c| c.check == check).map(|c| c.verdict)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failed().is_empty())
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatteryOptions {
    pub seed: u64,
    /// Overrides the ladder in the pair spec.
    pub ladder: Option<Vec<(u64, u64)>>,
    /// Run only these checks; empty means all.
    pub only: Vec<String>,
}

/// Parse `"2:1,3:2"` into `(l, d)` pairs.
pub fn parse_ladder(s: &str) -> Result<Vec<(u64, u64)>, InputError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let bad = || InputError::Invalid(format!("ladder entry `{p}` is not of the form l:d"));
            let (l, d) = p.split_once(':').ok_or_else(bad)?;
            let l: u64 = l.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            if l < 2 || d < 1 {
                return Err(bad());
            }
            Ok((l, d))
        })
        .collect()
}

struct Side {
    presentation: Option<FiberedPresentation>,
    ball: Option<NormBall>,
    fibered_class: Option<Vec<BigInt>>,
    graph: Option<TransitionGraph>,
    table: Option<OrbitTable>,
}

impl Side {
    fn build(s: &SideJson, name: &str) -> Result<Side, InputError> {
        let ctx = |e: InputError| InputError::Invalid(format!("side {name}: {e}"));
        let ball = s.ball.as_ref().map(NormBallJson::build).transpose().map_err(ctx)?;
        let fibered_class = s.fibered_class.as_ref().map(|c| bigs(c));
        if let (Some(b), Some(c)) = (&ball, &fibered_class) {
            if c.len() != b.dim() {
                return Err(InputError::Invalid(format!("side {name}: fibered_class has the wrong length")));
            }
        }
        let graph = s.graph.as_ref().map(GraphJson::build).transpose().map_err(ctx)?;
        if let (Some(b), Some(g)) = (&ball, &graph) {
            if g.h1_rank() != b.dim() {
                return Err(InputError::Invalid(format!("side {name}: graph homology rank differs from the ball dimension")));
            }
        }
        Ok(Side {
            presentation: s.presentation.as_ref().map(PresentationJson::build).transpose().map_err(ctx)?,
            ball,
            fibered_class,
            graph,
            table: s.orbits.as_ref().map(OrbitSourceJson::table).transpose().map_err(ctx)?,
        })
    }
}

struct Resolved<'a> {
    spec: &'a PairSpecJson,
    a: Side,
    b: Side,
    psi: SymbolicProfiniteMap,
    psi_json: SymbolicMapJson,
    mu: TruncatedProfiniteInt,
    eps: BigRational,
    ladder: Vec<(u64, u64)>,
    seed: u64,
}

fn generates(g: &FiniteGroup, gens: &[usize]) -> bool {
    let mut seen = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.len() == g.order()
}

fn resolve<'a>(spec: &'a PairSpecJson, opts: &BatteryOptions) -> Result<Resolved<'a>, InputError> {
    let mu = spec.mu.build()?;
    if !mu.is_unit() {
        return Err(InputError::Invalid(format!("mu = {mu} is not a unit")));
    }
    if let Some(q) = &spec.quotient {
        let g = q.group.build()?;
        for (side, images) in [("a", &q.images_a), ("b", &q.images_b)] {
            let els = images.iter().map(|e| e.resolve(&g)).collect::<Result<Vec<_>, _>>()?;
            if !generates(&g, &els) {
                return Err(InputError::Invalid(format!("quotient images of side {side} do not generate the group")));
            }
        }
    }
    let a = Side::build(&spec.a, "a")?;
    let b = Side::build(&spec.b, "b")?;
    let dim_a = a.ball.as_ref().map(NormBall::dim);
    let dim_b = b.ball.as_ref().map(NormBall::dim);
    if let (Some(x), Some(y)) = (dim_a, dim_b) {
        if x != y {
            return Err(InputError::Invalid(format!("norm balls have dimensions {x} and {y}")));
        }
    }
    let psi_json = match &spec.psi {
        Some(p) => p.clone(),
        None => SymbolicMapJson::scalar_identity(dim_a.or(dim_b).unwrap_or(1), &spec.mu),
    };
    let psi = psi_json.build()?;
    if dim_a.is_some_and(|d| d != psi.source_rank()) || dim_b.is_some_and(|d| d != psi.target_rank()) {
        return Err(InputError::Invalid("psi does not match the norm ball dimensions".into()));
    }
    let eps = spec.eps.as_ref().map_or_else(one, |r| r.0.clone());
    if eps.is_zero() {
        return Err(InputError::Invalid("eps must be nonzero".into()));
    }
    let ladder = opts.ladder.clone().or_else(|| spec.ladder.clone()).unwrap_or_else(|| DEFAULT_LADDER.to_vec());
    Ok(Resolved { spec, a, b, psi, psi_json, mu, eps, ladder, seed: opts.seed })
}

pub fn run_battery(spec: &PairSpecJson, opts: &BatteryOptions) -> Result<BatteryReport, InputError> {
    for c in &opts.only {
        if !CHECKS.contains(&c.as_str()) {
            return Err(InputError::Invalid(format!("unknown check `{c}`; known: {}", CHECKS.join(", "))));
        }
    }
    let r = resolve(spec, opts)?;
    type CheckFn = fn(&Resolved) -> Result<CheckResult, InputError>;
    let all: [(&str, CheckFn); 6] = [
        ("fried_duality", check_fried),
        ("mc", check_mc),
        ("nielsen", check_nielsen),
        ("norm_cones", check_norm_cones),
        ("norm_values", check_norm_values),
        ("torsion", check_torsion),
    ];
    let selected: Vec<(&str, CheckFn)> =
        all.into_iter().filter(|(n, _)| opts.only.is_empty() || opts.only.iter().any(|o| o == n)).collect();
    let results: Vec<Result<CheckResult, InputError>> = thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|(_, f)| s.spawn(|| f(&r))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    let mut checks = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    checks.sort_by(|x, y| x.check.cmp(&y.check));
    Ok(BatteryReport { pair: spec.name.clone(), scope: SCOPE.into(), checks })
}

fn check_mc(r: &Resolved) -> Result<CheckResult, InputError> {
    let (ok, detail) = mc_report(&r.psi)?;
    let c = CheckResult::new("mc", if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    Ok(if ok { c } else { c.with_witness("mc-rank", vec![], serde_json::to_value(&r.psi_json)?) })
}

/// Rank of the coefficient module and, in rank one, whether the generator is a unit.
pub fn mc_report(psi: &SymbolicProfiniteMap) -> Result<(bool, Value), InputError> {
    let m = mc_module(psi);
    let basis: Vec<Vec<Int>> = m.basis.iter().map(|v| ints(v)).collect();
    if m.rank != 1 {
        return Ok((false, json!({ "rank": m.rank, "basis": basis, "shape": "not rank one" })));
    }
    let f = rank_one_factor(psi)?;
    let unimodular = f.f.is_unimodular();
    let (ok, shape) = match &f.residue {
        Some(u) if u.is_unit() => (true, "Ẑ×-regular shape"),
        Some(_) => (false, "generator not a unit"),
        None => (false, "generator residue unknown"),
    };
    Ok((
        ok,
        json!({
            "rank": 1,
            "basis": basis,
            "shape": shape,
            "generator": ints(&f.generator),
            "residue": f.residue.as_ref().map(ProfiniteJson::from_value),
            "f": matrix_json(&f.f),
            "f_unimodular": unimodular,
        }),
    ))
}

fn t_at(r: &Resolved, eps: &BigRational) -> Result<RatMatrix, InputError> {
    Ok(dual_specialize(&r.psi, &eps_map(&r.psi, eps))?)
}

fn signs(r: &Resolved) -> [BigRational; 2] {
    [r.eps.clone(), -r.eps.clone()]
}

fn failure_json(f: &CorrespondenceFailure) -> Value {
    match f {
        CorrespondenceFailure::Straddle { source, meets } => json!({ "straddle": { "source": source, "meets": meets } }),
        CorrespondenceFailure::MarkingMismatch { source, target } => {
            json!({ "marking_mismatch": { "source": source, "target": target } })
        }
        CorrespondenceFailure::CountMismatch { a, b } => json!({ "count_mismatch": { "a": a, "b": b } }),
    }
}

pub fn correspondence_json(c: &Correspondence) -> Value {
    match c {
        Correspondence::Bijection(p) => json!({
            "bijection": p.iter().map(|x| json!({ "b": x.source, "a": x.target, "fibered": x.fibered })).collect::<Vec<_>>()
        }),
        Correspondence::Failure(f) => failure_json(f),
    }
}

fn check_norm_cones(r: &Resolved) -> Result<CheckResult, InputError> {
    const NAME: &str = "norm_cones";
    let (Some(ba), Some(bb)) = (&r.a.ball, &r.b.ball) else {
        return Ok(CheckResult::skipped(NAME, "needs a norm ball on both sides"));
    };
    if !ba.is_norm() || !bb.is_norm() {
        return Ok(CheckResult::skipped(NAME, "seminorm input refused: the unit ball is not compact"));
    }
    let mut tried = Vec::new();
    let mut first_t = None;
    for e in signs(r) {
        let t = t_at(r, &e)?;
        match cone_correspondence(ba, bb, &t) {
            Err(Error::DegenerateSpecialization(_)) => {
                return Ok(CheckResult::skipped(NAME, "specialization is singular"));
            }
            Err(e) => return Err(e.into()),
            Ok(c) if c.is_bijection() => {
                return Ok(CheckResult::new(
                    NAME,
                    Verdict::Pass,
                    json!({ "eps": Rat(e), "correspondence": correspondence_json(&c) }),
                ));
            }
            Ok(c) => {
                tried.push(json!({ "eps": Rat(e), "correspondence": correspondence_json(&c) }));
                first_t.get_or_insert(t);
            }
        }
    }
    let t = first_t.expect("both signs tried");
    let input = json!({
        "ball_a": r.spec.a.ball,
        "ball_b": r.spec.b.ball,
        "t": rat_matrix_json(&t),
    });
    Ok(CheckResult::new(NAME, Verdict::Fail, json!({ "tried": tried })).with_witness("norm-ball", vec![], input))
}

/// Unit vectors, their pairwise sums and differences, then `extra` random covectors.
pub fn sample_covectors(n: usize, extra: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let unit = |i: usize, s: i64| -> Vec<i64> { (0..n).map(|k| if k == i { s } else { 0 }).collect() };
    let mut out: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        out.push(unit(i, 1));
        out.push(unit(i, -1));
        for j in i + 1..n {
            out.push((0..n).map(|k| i64::from(k == i) + i64::from(k == j)).collect());
            out.push((0..n).map(|k| i64::from(k == i) - i64::from(k == j)).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        out.push((0..n).map(|_| rng.gen_range(-5..=5)).collect());
    }
    out.into_iter().map(|v| v.into_iter().map(|x| BigRational::from_integer(x.into())).collect()).collect()
}

/// First covector with `‖Tφ‖_A ≠ ‖φ‖_B`, with both values.
pub fn first_norm_mismatch(
    ba: &NormBall,
    bb: &NormBall,
    t: &RatMatrix,
    phis: &[Vec<BigRational>],
) -> Result<Option<(Vec<BigRational>, BigRational, BigRational)>, InputError> {
    for phi in phis {
        let lhs = thurston_norm(ba, &t.apply(phi))?;
        let rhs = thurston_norm(bb, phi)?;
        if lhs != rhs {
            return Ok(Some((phi.clone(), lhs, rhs)));
        }
    }
    Ok(None)
}

fn rats(v: &[BigRational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn check_norm_values(r: &Resolved) -> Result<CheckResult, InputError> {
    const NAME: &str = "norm_values";
    let mut detail = serde_json::Map::new();
    let mut failed = None;
    if let (Some(ba), Some(bb)) = (&r.a.ball, &r.b.ball) {
        let phis = sample_covectors(ba.dim(), r.spec.samples.unwrap_or(8), r.seed);
        detail.insert("samples".into(), json!(phis.len()));
        let mut first = None;
        let mut matched = None;
        for e in signs(r) {
            let t = t_at(r, &e)?;
            match first_norm_mismatch(ba, bb, &t, &phis)? {
                None => {
                    matched = Some(e);
                    break;
                }
                Some(m) => {
                    first.get_or_insert((t, m));
                }
            }
        }
        match matched {
            Some(e) => {
                detail.insert("eps".into(), json!(Rat(e)));
            }
            None => {
                let (t, (phi, lhs, rhs)) = first.expect("both signs tried");
                detail.insert("mismatch".into(), json!({ "phi": rats(&phi), "norm_a_of_t_phi": Rat(lhs), "norm_b": Rat(rhs) }));
                let input = json!({
                    "ball_a": r.spec.a.ball,
                    "ball_b": r.spec.b.ball,
                    "t": rat_matrix_json(&t),
                    "phis": [rats(&phi)],
                });
                failed = Some(Witness { subcommand: "norm-ball".into(), args: vec![], input });
            }
        }
    }
    let mut fibers = Vec::new();
    for (name, side, js) in [("a", &r.a, &r.spec.a), ("b", &r.b, &r.spec.b)] {
        let (Some(ball), Some(fc), Some(p)) = (&side.ball, &side.fibered_class, &side.presentation) else { continue };
        let norm = thurston_norm_int(ball, fc)?;
        let expected = BigInt::from((-p.surface().euler_characteristic()).max(0));
        let ok = norm == expected;
        fibers.push(json!({ "side": name, "norm": Int(norm), "expected": Int(expected.clone()), "ok": ok }));
        if !ok && failed.is_none() {
            let input = json!({ "ball": js.ball, "phis": [ints(fc)], "expected": [Int(expected)] });
            failed = Some(Witness { subcommand: "norm-ball".into(), args: vec![], input });
        }
    }
    if !fibers.is_empty() {
        detail.insert("fibered_classes".into(), json!(fibers));
    }
    if detail.is_empty() {
        return Ok(CheckResult::skipped(NAME, "needs norm balls or a fibered class"));
    }
    let verdict = if failed.is_some() { Verdict::Fail } else { Verdict::Pass };
    Ok(CheckResult { check: NAME.into(), verdict, detail: Value::Object(detail), witness: failed })
}

/// Torsion comparison over `ℚ(t)` together with ideal comparisons in `(ℤ/l)[ℤ/d]`.
pub fn compare_torsion(
    a: &FiberedPresentation,
    b: &FiberedPresentation,
    mu: &TruncatedProfiniteInt,
    ladder: &[(u64, u64)],
) -> Result<(bool, Value), InputError> {
    let (ha, hb) = thread::scope(|s| {
        let x = s.spawn(|| twisted_homology(a));
        let y = twisted_homology(b);
        (x.join().expect("homology thread panicked"), y)
    });
    let (ha, hb) = (ha?, hb?);
    let (ta, tb) = (ha.torsion()?, hb.torsion()?);
    let tau_equal = ta.doteq(&tb);
    let mut ideals = Vec::new();
    let mut unused = Vec::new();
    let mut ok = tau_equal;
    let polys: Vec<(LaurentPoly, LaurentPoly)> =
        (0..3).map(|n| Ok((ha.char_poly(n)?, hb.char_poly(n)?))).collect::<Result<_, Error>>()?;
    for &(l, d) in ladder {
        if !(mu.modulus() % BigInt::from(d)).is_zero() {
            unused.push(format!("{l}:{d}"));
            continue;
        }
        for (n, (pa, pb)) in polys.iter().enumerate() {
            let eq = ideal_equal(pa, pb, mu, l, d)?;
            ok &= eq;
            ideals.push(json!({ "degree": n, "l": l, "d": d, "equal": eq }));
        }
    }
    let values_at_one: Vec<Value> = polys
        .iter()
        .map(|(pa, pb)| json!([eval_one(pa).to_string(), eval_one(pb).to_string()]))
        .collect();
    Ok((
        ok,
        json!({
            "tau_a": ta.to_string(),
            "tau_b": tb.to_string(),
            "tau_equal": tau_equal,
            "char_poly_values_at_1": values_at_one,
            "ideals": ideals,
            "ladder_levels_skipped": unused,
        }),
    ))
}

fn eval_one(p: &LaurentPoly) -> BigInt {
    p.terms().map(|(_, c)| c.clone()).sum()
}

fn check_torsion(r: &Resolved) -> Result<CheckResult, InputError> {
    const NAME: &str = "torsion";
    let (Some(pa), Some(pb)) = (&r.a.presentation, &r.b.presentation) else {
        return Ok(CheckResult::skipped(NAME, "needs a fibered presentation on both sides"));
    };
    let (ok, detail) = compare_torsion(pa, pb, &r.mu, &r.ladder)?;
    let c = CheckResult::new(NAME, if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    if ok {
        return Ok(c);
    }
    let input = json!({
        "a": r.spec.a.presentation,
        "b": r.spec.b.presentation,
        "mu": r.spec.mu,
        "ladder": r.ladder,
    });
    Ok(c.with_witness("torsion", vec![], input))
}

fn nu_json(nu: &BTreeMap<i64, usize>) -> BTreeMap<String, usize> {
    nu.iter().map(|(i, c)| (i.to_string(), *c)).collect()
}

/// First `(m, i)` with `ν_m(i)` different for the two tables.
pub fn compare_nielsen(a: &OrbitTable, b: &OrbitTable, m_max: u32) -> Result<(Option<(u32, i64)>, Value), InputError> {
    let mut periods = Vec::new();
    let mut witness = None;
    for m in 1..=m_max {
        let na = nielsen_numbers(a, m)?;
        let nb = nielsen_numbers(b, m)?;
        if witness.is_none() && na.nu != nb.nu {
            let keys: BTreeSet<i64> = na.nu.keys().chain(nb.nu.keys()).copied().collect();
            let i = keys.into_iter().find(|i| na.nu.get(i) != nb.nu.get(i)).expect("maps differ");
            witness = Some((m, i));
        }
        periods.push(json!({ "m": m, "nu_a": nu_json(&na.nu), "nu_b": nu_json(&nb.nu), "N_a": na.total, "N_b": nb.total }));
    }
    let stretch = |t: &OrbitTable| -> Result<Vec<Value>, InputError> {
        Ok(stretch_estimate(t, m_max, 6)?
            .into_iter()
            .map(|s| json!({ "m": s.period, "count": s.count, "root_lower": decimal(&s.root_lower, 6) }))
            .collect())
    };
    let detail = json!({
        "m_max": m_max,
        "periods": periods,
        "stretch_a": stretch(a)?,
        "stretch_b": stretch(b)?,
        "first_difference": witness.map(|(m, i)| json!({ "m": m, "index": i })),
    });
    Ok((witness, detail))
}

/// Decimal expansion truncated toward zero.
pub fn decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let n = (x * BigRational::from_integer(scale.clone())).to_integer();
    let (sign, n) = if n.is_negative() { ("-", -n) } else { ("", n) };
    let s = format!("{:0>width$}", n.to_string(), width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    format!("{sign}{int}.{frac}")
}

fn check_nielsen(r: &Resolved) -> Result<CheckResult, InputError> {
    const NAME: &str = "nielsen";
    let (Some(ta), Some(tb)) = (&r.a.table, &r.b.table) else {
        return Ok(CheckResult::skipped(NAME, "needs periodic orbit data on both sides"));
    };
    let m_max = r.spec.m_max.unwrap_or_else(|| ta.max_period().min(tb.max_period()));
    let (w, detail) = compare_nielsen(ta, tb, m_max)?;
    let Some((m, _)) = w else {
        return Ok(CheckResult::new(NAME, Verdict::Pass, detail));
    };
    let input = json!({ "a": r.spec.a.orbits, "b": r.spec.b.orbits });
    Ok(CheckResult::new(NAME, Verdict::Fail, detail).with_witness("nielsen", vec!["--mmax".into(), m.to_string()], input))
}

fn pairing_nonneg(covectors: &[Vec<BigInt>], vectors: &[Vec<BigInt>]) -> bool {
    covectors.iter().all(|c| vectors.iter().all(|v| c.iter().zip(v).map(|(x, y)| x * y).sum::<BigInt>() >= BigInt::zero()))
}

fn signed(rays: &[Vec<BigInt>], lines: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rays.iter().cloned().chain(lines.iter().flat_map(|l| [l.clone(), l.iter().map(|x| -x).collect()])).collect()
}

fn check_fried(r: &Resolved) -> Result<CheckResult, InputError> {
    const NAME: &str = "fried_duality";
    let mut sides = Vec::new();
    let mut ok = true;
    let mut cones = BTreeMap::new();
    for (name, side) in [("a", &r.a), ("b", &r.b)] {
        let Some(g) = &side.graph else { continue };
        let fc = fried_cone(g, FRIED_DEPTH)?;
        let dirs = signed(fc.cone.rays(), fc.cone.lines());
        let mut entry = json!({ "side": name, "rays": fc.cone.rays().iter().map(|v| ints(v)).collect::<Vec<_>>(), "stabilized": fc.stabilized });
        if let Some(ball) = side.ball.as_ref().filter(|b| !b.fibered().is_empty() && b.is_norm()) {
            let dual_ok = norm_cones(ball)?
                .iter()
                .filter(|c| c.fibered)
                .any(|c| pairing_nonneg(&signed(c.cone.rays(), c.cone.lines()), &dirs));
            entry["nonnegative_on_a_fibered_cone"] = json!(dual_ok);
            ok &= dual_ok;
        }
        cones.insert(name, fc.cone);
        sides.push(entry);
    }
    if sides.is_empty() {
        return Ok(CheckResult::skipped(NAME, "needs a transition graph"));
    }
    let mut detail = json!({ "sides": sides });
    if let (Some(ca), Some(cb)) = (cones.get("a"), cones.get("b")) {
        let mut matched = false;
        for e in signs(r) {
            let push = specialize(&r.psi, &eps_map(&r.psi, &e))?;
            if ca.ambient_dim() == push.cols() && ca.image(&push)? == *cb {
                matched = true;
                break;
            }
        }
        detail["homology_directions_correspond"] = json!(matched);
        ok &= matched;
    }
    Ok(CheckResult::new(NAME, if ok { Verdict::Pass } else { Verdict::Fail }, detail))
}
