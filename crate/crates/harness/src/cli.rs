//! The `fibered` command line. Exit status: 0 all checks pass, 1 a check
//! failed, 2 bad input.

use std::io::Read;

use clap::{Parser, Subcommand};
use fibered_core::cones::{face_lattice, norm_cones, projective_dual, thurston_norm, NormBall};
use fibered_core::dynamics::{
    balanced_polytope, fried_cone, lefschetz, nielsen_bound, nielsen_numbers, omega_classes, stretch_estimate,
    zeta_series, OrbitTable,
};
use fibered_core::exact::LaurentPoly;
use fibered_core::fibered::{duality_check, twisted_homology};
use fibered_core::profinite::{fried_compare, FriedVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::battery::{
    compare_nielsen, compare_torsion, correspondence_json, decimal, first_norm_mismatch, mc_report, parse_ladder,
    run_battery, BatteryOptions, DEFAULT_LADDER,
};
use crate::model::*;
use crate::{parse_json, InputError};

/// Environment variable overriding the `(l, d)` ladder, e.g. `2:1,3:2`.
pub const LADDER_ENV: &str = "FIBERED_LADDER";

#[derive(Debug, Parser)]
#[command(name = "fibered", version, about = "Exact invariants of fibered 3-manifolds and their comparison battery")]
struct Cli {
    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Twisted homology, Alexander polynomials and duality of a fibered presentation.
    Alexander {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Reidemeister torsion of a presentation, or a comparison of two.
    Torsion {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Indexed Nielsen numbers of an orbit table or linear model, or a comparison of two.
    Nielsen {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Twisted Lefschetz zeta series and its rational fit.
    Zeta {
        #[arg(long, visible_alias = "input", default_value = "-")]
        model: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Twist by the indicator of this power-class of the quotient group.
        #[arg(long)]
        omega: Option<usize>,
    },
    /// Cone of homology directions of a transition graph.
    FriedCone {
        #[arg(long, visible_alias = "input", default_value = "-")]
        graph: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Cones, faces and values of a norm ball, or a comparison of two balls.
    NormBall {
        #[arg(long, default_value = "-")]
        input: String,
        /// Covector to evaluate, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        phi: Vec<String>,
    },
    /// Coefficient module of a symbolic profinite map.
    McRank {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Compare two reciprocal polynomials through cyclic resultants.
    CompareReciprocal {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 10)]
        mmax: u32,
    },
    /// Run the comparison battery on a pair spec.
    Battery {
        #[arg(long, visible_alias = "input", default_value = "-")]
        pair: String,
        /// Run only the named check; repeatable.
        #[arg(long)]
        check: Vec<String>,
        /// `(l, d)` ladder such as `2:1,3:2`; overrides the environment and the pair spec.
        #[arg(long)]
        ladder: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok((code, v)) => Outcome {
            code,
            stdout: serde_json::to_string_pretty(&v).expect("report serializes") + "\n",
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, InputError> {
    let mut s = String::new();
    if path == "-" {
        stdin.read_to_string(&mut s).map_err(|source| InputError::Io { path: "stdin".into(), source })?;
    } else {
        s = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.into(), source })?;
    }
    Ok(s)
}

/// Parse to a value first, so syntax errors carry their position, and
/// report whether the object has every key in `keys`.
fn has_keys(text: &str, keys: &[&str]) -> Result<bool, InputError> {
    let v: Value = parse_json(text)?;
    Ok(keys.iter().all(|k| v.get(k).is_some()))
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    parse_json(text)
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<(i32, Value), InputError> {
    match &cli.cmd {
        Cmd::Alexander { input } => alexander(&read_input(input, stdin)?),
        Cmd::Torsion { input } => torsion(&read_input(input, stdin)?),
        Cmd::Nielsen { input, mmax } => nielsen(&read_input(input, stdin)?, *mmax),
        Cmd::Zeta { model, depth, omega } => zeta(&read_input(model, stdin)?, *depth, *omega),
        Cmd::FriedCone { graph, max_len } => fried(&read_input(graph, stdin)?, *max_len),
        Cmd::NormBall { input, phi } => norm_ball(&read_input(input, stdin)?, phi),
        Cmd::McRank { input } => {
            let m: SymbolicMapJson = parse(&read_input(input, stdin)?)?;
            let (ok, v) = mc_report(&m.build()?)?;
            Ok((code(ok), v))
        }
        Cmd::CompareReciprocal { a, b, mmax } => compare_reciprocal(a, b, *mmax),
        Cmd::Battery { pair, check, ladder } => {
            let spec: PairSpecJson = parse(&read_input(pair, stdin)?)?;
            let ladder = match ladder {
                Some(s) => Some(parse_ladder(s)?),
                None => std::env::var(LADDER_ENV).ok().map(|s| parse_ladder(&s)).transpose()?,
            };
            let opts = BatteryOptions { seed: cli.seed, ladder, only: check.clone() };
            let report = run_battery(&spec, &opts)?;
            Ok((report.exit_code(), serde_json::to_value(&report)?))
        }
    }
}

fn poly_str(p: &LaurentPoly) -> String {
    p.to_string()
}

fn alexander(text: &str) -> Result<(i32, Value), InputError> {
    let p: PresentationJson = parse(text)?;
    let fp = p.build()?;
    let h = twisted_homology(&fp)?;
    let mut degrees = Vec::new();
    for n in 0..3 {
        let Some(d) = h.degree(n) else { continue };
        degrees.push(json!({
            "degree": n,
            "free_rank": d.free_rank,
            "torsion_coefficients": ints(&d.torsion),
            "char_poly": poly_str(&h.char_poly(n)?),
            "alexander": poly_str(&h.alexander(n)?),
        }));
    }
    let dual = duality_check(&fp)?;
    let pairings: Vec<Value> = dual
        .pairings
        .iter()
        .map(|p| json!({ "pairing": p.label, "lhs": poly_str(&p.lhs), "rhs": poly_str(&p.rhs), "pass": p.pass }))
        .collect();
    Ok((
        code(dual.pass()),
        json!({
            "chain_ranks": h.chain_ranks,
            "degrees": degrees,
            "torsion": h.torsion()?.to_string(),
            "duality": { "pass": dual.pass(), "pairings": pairings },
        }),
    ))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TorsionCompare {
    a: PresentationJson,
    b: PresentationJson,
    #[serde(default)]
    mu: Option<ProfiniteJson>,
    #[serde(default)]
    ladder: Option<Vec<(u64, u64)>>,
}

fn torsion(text: &str) -> Result<(i32, Value), InputError> {
    if has_keys(text, &["a", "b"])? {
        let c: TorsionCompare = parse(text)?;
        let mu = c.mu.as_ref().map(ProfiniteJson::build).transpose()?;
        let mu = match mu {
            Some(m) => m,
            None => fibered_core::profinite::TruncatedProfiniteInt::one(1)?,
        };
        if !mu.is_unit() {
            return Err(InputError::Invalid(format!("mu = {mu} is not a unit")));
        }
        let ladder = c.ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
        let (ok, v) = compare_torsion(&c.a.build()?, &c.b.build()?, &mu, &ladder)?;
        return Ok((code(ok), v));
    }
    let p: PresentationJson = parse(text)?;
    let h = twisted_homology(&p.build()?)?;
    let deltas = (0..3).map(|n| h.alexander(n).map(|d| poly_str(&d))).collect::<Result<Vec<_>, _>>()?;
    Ok((0, json!({ "torsion": h.torsion()?.to_string(), "alexander": deltas })))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct NielsenCompare {
    a: OrbitSourceJson,
    b: OrbitSourceJson,
}

fn nielsen(text: &str, mmax: Option<u32>) -> Result<(i32, Value), InputError> {
    if has_keys(text, &["a", "b"])? {
        let c: NielsenCompare = parse(text)?;
        let (ta, tb) = (c.a.table()?, c.b.table()?);
        let m = mmax.unwrap_or_else(|| ta.max_period().min(tb.max_period()));
        let (w, v) = compare_nielsen(&ta, &tb, m)?;
        return Ok((code(w.is_none()), v));
    }
    let src: OrbitSourceJson = parse(text)?;
    let table = src.table()?;
    let m_max = mmax.unwrap_or_else(|| table.max_period());
    if m_max > table.max_period() {
        return Err(InputError::Invalid(format!("table only covers periods up to {}", table.max_period())));
    }
    let mut periods = Vec::new();
    for m in 1..=m_max {
        let n = nielsen_numbers(&table, m)?;
        let mut entry = json!({
            "m": m,
            "nu": n.nu.iter().map(|(i, c)| (i.to_string(), *c)).collect::<std::collections::BTreeMap<_, _>>(),
            "N": n.total,
            "lefschetz": Int(lefschetz(&table, m)?),
            "flagged": n.flagged,
        });
        if let OrbitSourceJson::Model(model) = &src {
            entry["fixed_point_count"] = json!(Int(model.build()?.fixed_point_count(m)));
        }
        periods.push(entry);
    }
    let stretch: Vec<Value> = stretch_estimate(&table, m_max, 6)?
        .into_iter()
        .map(|s| json!({ "m": s.period, "count": s.count, "root_lower": decimal(&s.root_lower, 6), "running_max": decimal(&s.running_max, 6) }))
        .collect();
    let mut out = json!({ "max_period": m_max, "periods": periods, "stretch": stretch });
    let mut ok = true;
    if let Some(g) = table.group() {
        let om = omega_classes(g);
        let bounds = (1..=m_max)
            .map(|m| {
                let b = nielsen_bound(&table, m, &om)?;
                ok &= b.holds();
                Ok(json!({
                    "m": m,
                    "nielsen": b.nielsen,
                    "nonzero_parts": b.nonzero_parts,
                    "distinct_hits": b.distinct_hits,
                    "equality_holds": b.equality_holds,
                    "holds": b.holds(),
                }))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        out["classes"] = json!(class_listing(g));
        out["omega_parts"] = json!(om.parts);
        out["omega_bound"] = json!(bounds);
    }
    Ok((code(ok), out))
}

fn class_listing(g: &fibered_core::group::FiniteGroup) -> Vec<Value> {
    g.conjugacy_classes()
        .iter()
        .map(|c| json!({ "size": c.len(), "representative": c[0], "permutation": g.permutation(c[0]) }))
        .collect()
}

fn zeta(text: &str, depth: u32, omega: Option<usize>) -> Result<(i32, Value), InputError> {
    let mut src: OrbitSourceJson = parse(text)?;
    if let OrbitSourceJson::Model(m) = &mut src {
        m.periods = m.periods.max(depth);
    }
    let table: OrbitTable = src.table()?;
    if depth > table.max_period() {
        return Err(InputError::Invalid(format!("depth {depth} exceeds the table's periods ({})", table.max_period())));
    }
    let xi = match omega {
        None => None,
        Some(w) => {
            let g = table.group().ok_or_else(|| InputError::Invalid("--omega needs a quotient group".into()))?;
            let om = omega_classes(g);
            if w >= om.len() {
                return Err(InputError::Invalid(format!("there are only {} power classes", om.len())));
            }
            Some(om.indicator(w))
        }
    };
    let z = zeta_series(&table, xi.as_deref(), depth)?;
    let rs = |v: &[BigRational]| v.iter().cloned().map(Rat).collect::<Vec<_>>();
    let fit = z.fit.as_ref().map(|f| {
        json!({ "numerator": poly_str(f.numerator()), "denominator": poly_str(f.denominator()), "display": f.to_string() })
    });
    let ok = fit.is_some();
    let mut out = json!({ "depth": depth, "lefschetz": rs(&z.lefschetz), "series": rs(&z.coeffs), "fit": fit });
    if !ok {
        out["message"] = json!(format!("no rational function with total degree at most {} matches", depth / 2));
    }
    Ok((code(ok), out))
}

fn fried(text: &str, max_len: usize) -> Result<(i32, Value), InputError> {
    let g: GraphJson = parse(text)?;
    let g = g.build()?;
    let fc = fried_cone(&g, max_len)?;
    let vs = |v: &[Vec<BigInt>]| v.iter().map(|x| ints(x)).collect::<Vec<_>>();
    let bp = balanced_polytope(&g)?;
    Ok((
        0,
        json!({
            "rays": vs(fc.cone.rays()),
            "lines": vs(fc.cone.lines()),
            "facets": vs(fc.cone.facets()),
            "dimension": fc.cone.dimension(),
            "stabilized": fc.stabilized,
            "stable_from": fc.stable_from,
            "balanced_polytope": { "vertices": vs(bp.vertices()), "dimension": bp.dimension() },
        }),
    ))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct NormCompare {
    ball_a: NormBallJson,
    ball_b: NormBallJson,
    t: Vec<Vec<Rat>>,
    #[serde(default)]
    phis: Vec<Vec<Rat>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct NormEval {
    ball: NormBallJson,
    phis: Vec<Vec<Rat>>,
    expected: Vec<Rat>,
}

fn to_rats(v: &[Rat]) -> Vec<BigRational> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn parse_phi(s: &str, dim: usize) -> Result<Vec<BigRational>, InputError> {
    let v: Vec<Rat> = parse(&format!("[{}]", s.split(',').map(|x| format!("\"{}\"", x.trim())).collect::<Vec<_>>().join(",")))?;
    if v.len() != dim {
        return Err(InputError::Invalid(format!("--phi {s} has {} entries, expected {dim}", v.len())));
    }
    Ok(to_rats(&v))
}

fn norm_ball(text: &str, phi: &[String]) -> Result<(i32, Value), InputError> {
    if has_keys(text, &["ball_a", "ball_b"])? {
        let c: NormCompare = parse(text)?;
        let (ba, bb) = (c.ball_a.build()?, c.ball_b.build()?);
        let t = rat_matrix(&c.t, "t")?;
        let mut ok = true;
        let mut out = json!({});
        if ba.is_norm() && bb.is_norm() {
            let corr = fibered_core::cones::cone_correspondence(&ba, &bb, &t)?;
            ok &= corr.is_bijection();
            out["correspondence"] = correspondence_json(&corr);
        }
        let phis: Vec<Vec<BigRational>> = c.phis.iter().map(|p| to_rats(p)).collect();
        if let Some((p, l, r)) = first_norm_mismatch(&ba, &bb, &t, &phis)? {
            ok = false;
            out["mismatch"] = json!({ "phi": p.into_iter().map(Rat).collect::<Vec<_>>(), "norm_a_of_t_phi": Rat(l), "norm_b": Rat(r) });
        }
        out["pass"] = json!(ok);
        return Ok((code(ok), out));
    }
    if has_keys(text, &["ball", "expected"])? {
        let e: NormEval = parse(text)?;
        let ball = e.ball.build()?;
        if e.phis.len() != e.expected.len() {
            return Err(InputError::Invalid("phis and expected differ in length".into()));
        }
        let mut ok = true;
        let mut values = Vec::new();
        for (p, x) in e.phis.iter().zip(&e.expected) {
            let n = thurston_norm(&ball, &to_rats(p))?;
            ok &= n == x.0;
            values.push(json!({ "phi": p, "norm": Rat(n), "expected": x }));
        }
        return Ok((code(ok), json!({ "values": values, "pass": ok })));
    }
    let b: NormBallJson = parse(text)?;
    let ball = b.build()?;
    describe_ball(&ball, phi)
}

fn describe_ball(ball: &NormBall, phi: &[String]) -> Result<(i32, Value), InputError> {
    let vs = |v: &[Vec<BigInt>]| v.iter().map(|x| ints(x)).collect::<Vec<_>>();
    let cones = norm_cones(ball)?;
    let mut cs = Vec::new();
    for c in &cones {
        let d = projective_dual(ball, &c.cone)?;
        cs.push(json!({
            "vertex": c.vertex,
            "fibered": c.fibered,
            "rays": vs(c.cone.rays()),
            "lines": vs(c.cone.lines()),
            "projective_dual": { "vertices": vs(&d.vertices()), "dimension": d.dimension(), "codimension": d.codimension() },
        }));
    }
    let faces: Vec<Value> = face_lattice(&cones)?
        .iter()
        .map(|f| json!({ "cones": f.cones, "dimension": f.dimension(), "rays": vs(f.cone.rays()) }))
        .collect();
    let mut norms = Vec::new();
    for p in phi {
        let v = parse_phi(p, ball.dim())?;
        let n = thurston_norm(ball, &v)?;
        norms.push(json!({ "phi": v.into_iter().map(Rat).collect::<Vec<_>>(), "norm": Rat(n) }));
    }
    Ok((
        0,
        json!({
            "dim": ball.dim(),
            "rank": ball.rank(),
            "kernel_dimension": ball.kernel_dimension(),
            "is_norm": ball.is_norm(),
            "cones": cs,
            "faces": faces,
            "norms": norms,
        }),
    ))
}

fn compare_reciprocal(a: &str, b: &str, mmax: u32) -> Result<(i32, Value), InputError> {
    let pa: LaurentPoly = a.parse()?;
    let pb: LaurentPoly = b.parse()?;
    let v = fried_compare(&pa, &pb, mmax)?;
    let c = match v {
        FriedVerdict::DistinguishedAt(_) => 1,
        FriedVerdict::Equivalent | FriedVerdict::Inconclusive => 0,
    };
    Ok((c, json!({ "a": poly_str(&pa), "b": poly_str(&pb), "mmax": mmax, "verdict": v.to_string() })))
}
