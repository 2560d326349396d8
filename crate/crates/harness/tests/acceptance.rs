//! Acceptance suite: one line per criterion, each with its own time budget.
//! Runs as a plain binary so the verdict lines always reach the output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use fibered_core::cones::{projective_dual_of_cone, RationalCone};
use fibered_core::dynamics::{nielsen_bound, nielsen_numbers, omega_classes, LinearModel};
use fibered_core::exact::{annihilator_witness, laurent_doteq, IntMatrix, LaurentMatrix, LaurentPoly, RatMatrix, UnitGroup};
use fibered_core::profinite::{
    fried_compare, mc_module, rank_one_factor, specialize, FriedVerdict, ProfiniteTerm, SymbolicProfiniteMap,
    TruncatedProfiniteInt,
};
use fibered_harness::battery::{BatteryReport, Verdict};
use fibered_harness::cli::{run, Outcome};
use fibered_harness::model::OrbitSourceJson;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

fn cli(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("fibered").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes())
}

fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let out = cli(args, "");
    let v = serde_json::from_str(&out.stdout).map_err(|e| format!("{args:?}: {e}; stderr {}", out.stderr))?;
    Ok((out.code, v))
}

fn poly(s: &str) -> LaurentPoly {
    s.parse().expect("test polynomial")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn det2(a: [[i128; 2]; 2]) -> i128 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn mul2(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// `det(I − Aᵐ)` by repeated 2 x 2 multiplication.
fn det_one_minus_power(a: [[i128; 2]; 2], m: u32) -> i128 {
    let mut p = [[1, 0], [0, 1]];
    for _ in 0..m {
        p = mul2(p, a);
    }
    det2([[1 - p[0][0], -p[0][1]], [-p[1][0], 1 - p[1][1]]])
}

const CAT: [[i128; 2]; 2] = [[2, 1], [1, 1]];

fn criterion_1() -> Check {
    let path = corpus("presentations/catmap.json");
    let path = path.to_str().unwrap();
    let (code, alex) = cli_json(&["alexander", "--input", path])?;
    ensure(code == 0, || format!("alexander exit {code}"))?;
    // det(1 − tA) = 1 − tr(A)·t + det(A)·t² for a 2 x 2 matrix.
    let tr = CAT[0][0] + CAT[1][1];
    let d1_oracle = LaurentPoly::from_coeffs(0, [1, -tr, det2(CAT)].map(BigInt::from));
    let d0_oracle = poly("1-t");
    let degree = |n: usize| -> Result<LaurentPoly, String> {
        let s = alex["degrees"][n]["alexander"].as_str().ok_or("missing degree")?;
        s.parse().map_err(|e| format!("{e}"))
    };
    let (d0, d1) = (degree(0)?, degree(1)?);
    ensure(laurent_doteq(&d1, &d1_oracle, UnitGroup::Rationals), || format!("Δ₁ = {d1}"))?;
    ensure(laurent_doteq(&d1, &poly("t^2-3t+1"), UnitGroup::PlusMinusOne), || format!("Δ₁ = {d1}"))?;
    ensure(laurent_doteq(&d0, &d0_oracle, UnitGroup::PlusMinusOne), || format!("Δ₀ = {d0}"))?;
    let (code, tor) = cli_json(&["torsion", "--input", path])?;
    ensure(code == 0, || format!("torsion exit {code}"))?;
    let tau = tor["torsion"].as_str().ok_or("missing torsion")?;
    let (num, den) = tau.split_once('/').ok_or_else(|| format!("torsion {tau} is not a quotient"))?;
    let strip = |s: &str| s.trim().trim_start_matches('(').trim_end_matches(')').to_string();
    let (num, den): (LaurentPoly, LaurentPoly) = (poly(&strip(num)), poly(&strip(den)));
    // τ ≐ (t²−3t+1)/(1−t): cross-multiplied equality up to units.
    ensure(laurent_doteq(&(&num * &d0_oracle), &(&den * &d1_oracle), UnitGroup::Rationals), || format!("τ = {tau}"))?;
    Ok(format!("Δ₀ = {d0}, Δ₁ = {d1}, τ = {tau}"))
}

fn rat(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn criterion_2() -> Check {
    let path = corpus("models/catmap.json");
    let (code, z) = cli_json(&["zeta", "--model", path.to_str().unwrap(), "--depth", "8"])?;
    ensure(code == 0, || format!("zeta exit {code}"))?;
    let depth = 8usize;
    // Series of (1 − 3t + t²)/(1 − t)² by long division.
    let num = [1, -3, 1];
    let den = [1, -2, 1];
    let mut expansion = vec![0i128; depth + 1];
    for n in 0..=depth {
        let mut c = if n < num.len() { num[n] } else { 0 };
        for k in 1..den.len().min(n + 1) {
            c -= den[k] * expansion[n - k];
        }
        expansion[n] = c;
    }
    // exp(Σ L_m tᵐ/m) with L_m = det(I − Aᵐ).
    let l: Vec<BigRational> = (1..=depth as u32).map(|m| rat(det_one_minus_power(CAT, m))).collect();
    let mut c = vec![BigRational::one()];
    for n in 1..=depth {
        let s: BigRational = (1..=n).map(|k| &l[k - 1] * &c[n - k]).sum();
        c.push(s / rat(n as i128));
    }
    let expected: Vec<BigRational> = expansion.iter().map(|&x| rat(x)).collect();
    ensure(c == expected, || format!("exp series {c:?} vs expansion {expected:?}"))?;
    let series: Vec<BigRational> = z["series"]
        .as_array()
        .ok_or("missing series")?
        .iter()
        .map(|v| v.as_str().unwrap_or("x").parse::<BigRational>().map_err(|e| format!("{e}")))
        .collect::<Result<_, _>>()?;
    ensure(series == expected, || format!("CLI series {series:?}"))?;
    let fit_num = poly(z["fit"]["numerator"].as_str().ok_or("no fit")?);
    let fit_den = poly(z["fit"]["denominator"].as_str().ok_or("no fit")?);
    ensure(&fit_num * &poly("1-2t+t^2") == &fit_den * &poly("1-3t+t^2"), || {
        format!("fit {fit_num} / {fit_den}")
    })?;
    Ok(format!("fit ({fit_num})/({fit_den}), {} coefficients match", depth + 1))
}

fn criterion_3() -> Check {
    let model = LinearModel::cat_map();
    let table = model.orbit_table(10).map_err(|e| e.to_string())?;
    let mut ns = Vec::new();
    for m in 1..=10u32 {
        let count = table.at_period(m).count() as i128;
        let oracle = det_one_minus_power(CAT, m).abs();
        ensure(count == oracle, || format!("period {m}: {count} records, |det(Aᵐ − I)| = {oracle}"))?;
        let n = nielsen_numbers(&table, m).map_err(|e| e.to_string())?;
        ensure(n.total as i128 == oracle, || format!("N_{m} = {} vs {oracle}", n.total))?;
        ns.push(n.total);
    }
    ensure(ns[..3] == [1, 5, 16], || format!("N_1..3 = {:?}", &ns[..3]))?;
    let mut sources = Vec::new();
    for dir in ["models", "tables"] {
        for e in std::fs::read_dir(corpus(dir)).map_err(|e| e.to_string())? {
            sources.push(e.map_err(|e| e.to_string())?.path());
        }
    }
    sources.sort();
    let (mut checked, mut tables) = (0, 0);
    for path in sources {
        let s = path.display();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let src: OrbitSourceJson = serde_json::from_str(&text).map_err(|e| format!("{s}: {e}"))?;
        let t = src.table().map_err(|e| format!("{s}: {e}"))?;
        let Some(g) = t.group().filter(|g| [5, 6].contains(&g.order())) else { continue };
        tables += 1;
        let om = omega_classes(g);
        for m in 1..=t.max_period() {
            let b = nielsen_bound(&t, m, &om).map_err(|e| e.to_string())?;
            ensure(b.nielsen >= b.nonzero_parts && b.holds(), || format!("{s}, m = {m}: {b:?}"))?;
            checked += 1;
        }
    }
    ensure(tables >= 4, || format!("only {tables} tables with a quotient group"))?;
    Ok(format!("N_1..10 = {ns:?}; Ω bound on {tables} tables, {checked} (table, m) cases"))
}

fn reciprocal_blocks() -> Vec<LaurentPoly> {
    let mut v: Vec<LaurentPoly> = [2u32, 3, 4, 5, 6, 8, 10, 12].iter().map(|&n| fibered_core::exact::cyclotomic(n)).collect();
    v.push(poly("t^2-2t+1"));
    for k in [3i64, 4, 5, 6, 7, -3, -4, -5, -6] {
        v.push(LaurentPoly::from_coeffs(0, [1, -k, 1].map(BigInt::from)));
    }
    v.push(poly("t^4-t^3-t^2-t+1"));
    v
}

fn random_reciprocal(rng: &mut ChaCha8Rng, blocks: &[LaurentPoly]) -> Vec<usize> {
    let mut deg = 0;
    let mut picks = Vec::new();
    let target = rng.gen_range(2..=8);
    for _ in 0..20 {
        let i = rng.gen_range(0..blocks.len());
        let d = blocks[i].high_exp().unwrap_or(0);
        if deg + d <= target {
            deg += d;
            picks.push(i);
        }
        if deg == target {
            break;
        }
    }
    if picks.is_empty() {
        picks.push(0);
    }
    picks
}

fn product(blocks: &[LaurentPoly], picks: &[usize]) -> LaurentPoly {
    picks.iter().fold(LaurentPoly::one(), |acc, &i| &acc * &blocks[i])
}

fn criterion_4() -> Check {
    let blocks = reciprocal_blocks();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut decided, mut agree) = (0, 0);
    let total = 200;
    for _ in 0..total {
        let pa = random_reciprocal(&mut rng, &blocks);
        let pb = match rng.gen_range(0..10) {
            0..=3 => {
                let mut p = pa.clone();
                p.shuffle(&mut rng);
                p
            }
            4..=6 => {
                let mut p = pa.clone();
                let i = rng.gen_range(0..p.len());
                let d = blocks[p[i]].high_exp();
                let same: Vec<usize> = (0..blocks.len()).filter(|&j| blocks[j].high_exp() == d).collect();
                p[i] = *same.choose(&mut rng).unwrap();
                p
            }
            _ => random_reciprocal(&mut rng, &blocks),
        };
        let a = product(&blocks, &pa);
        let mut b = product(&blocks, &pb);
        if rng.gen_bool(0.5) {
            b = -b;
        }
        b = b.shift(rng.gen_range(-2..=2));
        let oracle = laurent_doteq(&a, &b, UnitGroup::PlusMinusOne);
        let verdict = fried_compare(&a, &b, 12).map_err(|e| format!("{a} vs {b}: {e}"))?;
        match verdict {
            FriedVerdict::Inconclusive => {}
            FriedVerdict::Equivalent => {
                decided += 1;
                ensure(oracle, || format!("{a} vs {b}: equivalent but not ≐"))?;
                agree += 1;
            }
            FriedVerdict::DistinguishedAt(m) => {
                decided += 1;
                ensure(!oracle, || format!("{a} vs {b}: distinguished at {m} but ≐"))?;
                agree += 1;
            }
        }
    }
    ensure(decided * 10 >= total * 9, || format!("only {decided}/{total} decided"))?;
    Ok(format!("{decided}/{total} decided, {agree} agree with the oracle"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=5)))
}

fn random_symbolic(rng: &mut ChaCha8Rng) -> SymbolicProfiniteMap {
    let s = rng.gen_range(1..=3usize);
    let (a, b) = (rng.gen_range(1..=4usize), rng.gen_range(1..=4usize));
    let r = rng.gen_range(0..=s);
    let gens: Vec<Vec<i64>> = (0..r).map(|_| (0..s).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let mut entries = vec![vec![0i64; s]; a * b];
    for e in entries.iter_mut() {
        for g in &gens {
            let c = rng.gen_range(-2..=2);
            for (x, y) in e.iter_mut().zip(g) {
                *x += c * y;
            }
        }
    }
    let terms = (0..s)
        .map(|k| ProfiniteTerm {
            matrix: IntMatrix::from_fn(b, a, |i, j| BigInt::from(entries[i * a + j][k])),
            symbol: format!("z{k}"),
            residue: Some(TruncatedProfiniteInt::new(*[1i64, 5, 7, 11].choose(rng).unwrap(), 12).unwrap()),
        })
        .collect();
    SymbolicProfiniteMap::new(a, b, terms).unwrap()
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut by_rank: BTreeMap<usize, usize> = BTreeMap::new();
    let mut round_trips = 0;
    for _ in 0..500 {
        let phi = random_symbolic(&mut rng);
        let rank = mc_module(&phi).rank;
        let rows: Vec<Vec<BigRational>> = (0..10)
            .map(|_| {
                let eps: BTreeMap<String, BigRational> =
                    phi.symbols().into_iter().map(|s| (s.to_string(), random_rational(&mut rng))).collect();
                specialize(&phi, &eps).unwrap().to_rows().concat()
            })
            .collect();
        let cols = phi.source_rank() * phi.target_rank();
        let span = RatMatrix::from_rows(rows, cols).unwrap().rank();
        ensure(span == rank, || format!("module rank {rank}, specialization span {span} for {phi:?}"))?;
        *by_rank.entry(rank).or_insert(0) += 1;
        if rank == 1 {
            let f = rank_one_factor(&phi).map_err(|e| e.to_string())?;
            ensure(f.reassemble(&phi) == phi, || format!("round trip failed for {phi:?}"))?;
            ensure(f.negated().reassemble(&phi) == phi, || format!("negated round trip failed for {phi:?}"))?;
            round_trips += 1;
        }
    }
    Ok(format!("ranks {by_rank:?}, {round_trips} rank-one round trips"))
}

fn criterion_6() -> Check {
    let dir = corpus("pairs");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    let expected_failures: BTreeMap<&str, &[&str]> = BTreeMap::from([
        ("perturbed_dilated_ball.json", &["norm_values"][..]),
        ("perturbed_trace.json", &["torsion"][..]),
        ("perturbed_orbit_table.json", &["nielsen"][..]),
        ("perturbed_cone_count.json", &["norm_cones", "norm_values"][..]),
        ("perturbed_mc_residue.json", &["mc"][..]),
    ]);
    let (mut passing, mut perturbed) = (0, 0);
    for n in &names {
        let path = dir.join(n);
        let out = cli(&["battery", "--pair", path.to_str().unwrap()], "");
        let report: BatteryReport = serde_json::from_str(&out.stdout).map_err(|e| format!("{n}: {e} {}", out.stderr))?;
        let failed = report.failed();
        match expected_failures.get(n.as_str()) {
            None => {
                ensure(out.code == 0 && failed.is_empty(), || format!("{n}: exit {}, failed {failed:?}", out.code))?;
                passing += 1;
            }
            Some(want) => {
                ensure(out.code == 1 && failed == *want, || format!("{n}: exit {}, failed {failed:?}, wanted {want:?}", out.code))?;
                for c in report.checks.iter().filter(|c| c.verdict == Verdict::Fail) {
                    let w = c.witness.as_ref().ok_or_else(|| format!("{n}: {} has no witness", c.check))?;
                    let mut args: Vec<&str> = vec![w.subcommand.as_str()];
                    args.extend(w.args.iter().map(String::as_str));
                    args.extend(["--input", "-"]);
                    let again = cli(&args, &w.input.to_string());
                    ensure(again.code == 1, || format!("{n}: witness for {} exits {}: {}", c.check, again.code, again.stderr))?;
                }
                perturbed += 1;
            }
        }
    }
    ensure(perturbed == expected_failures.len(), || format!("found {perturbed} perturbed pairs"))?;
    // The orbit-table witness names the edited entry.
    let out = cli(&["battery", "--pair", corpus("pairs/perturbed_orbit_table.json").to_str().unwrap()], "");
    let v: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let nielsen = v["checks"].as_array().unwrap().iter().find(|c| c["check"] == "nielsen").unwrap();
    let first = &nielsen["detail"]["first_difference"];
    ensure(first["m"] == 2 && first["index"] == -1, || format!("nielsen witness {first}"))?;
    Ok(format!("{passing} passing pairs exit 0; {perturbed} perturbed pairs fail only their check; witnesses reproduce"))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigInt> {
    loop {
        let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-4..=4))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    v.iter().map(|x| x / &g).collect()
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pointed = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=n + 3);
        let gens: Vec<Vec<BigInt>> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
        let lines: Vec<Vec<BigInt>> = if rng.gen_bool(0.2) { vec![random_vector(&mut rng, n)] } else { vec![] };
        let c = RationalCone::from_generators(n, &gens, &lines).map_err(|e| e.to_string())?;
        let h = RationalCone::from_inequalities(n, c.facets(), c.equations()).map_err(|e| e.to_string())?;
        ensure(h.rays() == c.rays() && h.lines() == c.lines(), || format!("round trip changed {gens:?}"))?;
        ensure(h == c, || format!("H-representation changed for {gens:?}"))?;
        // Every input generator satisfies every inequality and equation.
        let dot = |f: &[BigInt], x: &[BigInt]| f.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>();
        for g in &gens {
            ensure(c.facets().iter().all(|f| !dot(f, g).is_negative()), || format!("{g:?} violates a facet"))?;
            ensure(c.equations().iter().all(|e| dot(e, g).is_zero()), || format!("{g:?} violates an equation"))?;
        }
        if lines.is_empty() && c.lines().is_empty() {
            pointed += 1;
            let inputs: Vec<Vec<BigInt>> = gens.iter().map(|g| primitive(g)).collect();
            for r in c.rays() {
                ensure(inputs.contains(r), || format!("ray {r:?} is not an input generator of {gens:?}"))?;
            }
        }
    }
    let one = BigInt::one;
    let zero = BigInt::zero;
    let quadrant = RationalCone::from_generators(2, &[vec![one(), zero()], vec![zero(), one()]], &[]).unwrap();
    let pd = projective_dual_of_cone(&quadrant);
    let mut vs = pd.vertices();
    vs.sort();
    ensure(vs == vec![vec![zero(), one()], vec![one(), zero()]] && pd.dimension() == 1, || {
        format!("projective dual of the quadrant: {vs:?}, dimension {}", pd.dimension())
    })?;
    Ok(format!("100 round trips ({pointed} pointed, rays checked against inputs); quadrant dual = [1:0]–[0:1]"))
}

fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    if rng.gen_bool(0.2) {
        return LaurentPoly::zero();
    }
    let low = rng.gen_range(-1..=1);
    let len = rng.gen_range(1..=4);
    LaurentPoly::from_coeffs(low, (0..len).map(|_| BigInt::from(rng.gen_range(-3..=3))))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut nonzero = 0;
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=4usize), rng.gen_range(1..=4usize));
        let mut p = LaurentMatrix::from_fn(r, c, |_, _| random_laurent(&mut rng));
        if rng.gen_bool(0.3) && r > 1 {
            // Force a dependent row.
            let k = random_laurent(&mut rng);
            for j in 0..c {
                p[(r - 1, j)] = &p[(0, j)] * &k;
            }
        }
        let w = annihilator_witness(&p);
        ensure(!w.a.is_zero(), || "a = 0".into())?;
        let pqp = p.mul(&w.q).and_then(|x| x.mul(&p)).map_err(|e| e.to_string())?;
        let ap = LaurentMatrix::from_fn(r, c, |i, j| &w.a * &p[(i, j)]);
        ensure(pqp == ap, || format!("PQP ≠ aP for {p:?}"))?;
        ensure(w.verify(&p), || "verify disagrees".into())?;
        if !p.is_zero() {
            nonzero += 1;
        }
    }
    Ok(format!("100 matrices ({nonzero} nonzero) satisfy PQP = aP"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, u64); 8] = [
        ("1 fibered-module Alexander polynomials and torsion", criterion_1, 1),
        ("2 zeta series and rational reconstruction", criterion_2, 1),
        ("3 Nielsen counts and the power-class bound", criterion_3, 5),
        ("4 reciprocal polynomial comparison", criterion_4, 30),
        ("5 coefficient modules", criterion_5, 10),
        ("6 battery soundness on the corpus", criterion_6, 10),
        ("7 cone round trips and projective duals", criterion_7, 10),
        ("8 annihilator witnesses", criterion_8, 10),
    ];
    let mut failures = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (tag, msg) = match (&result, in_time) {
            (Ok(m), true) => ("PASS", m.clone()),
            (Ok(m), false) => ("FAIL", format!("over the {limit} s budget; {m}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("{tag} criterion {name} [{:.3} s / {limit} s]: {msg}", elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
