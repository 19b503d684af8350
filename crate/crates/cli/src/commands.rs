use std::collections::BTreeMap;

use serde_json::{json, Value};
use tderiv::algebra::fmt_rational;
use tderiv::codf::{
    check_singer_premise, delta_type, from_unipoly, jet_at_zero, jet_box_witness, parse_singer, singer_residual,
    singer_to_geometric, solve_singer_formal, sturm_decide, CellTypeMatrix, CodfError, Decision, SatWitness,
};
use tderiv::coherence::{
    is_coherent, parse_condition, solve_condition_series, strong_coherence_probe, verify_solution, CoherenceError,
    Condition, Conflict,
};
use tderiv::jet::{rewrite_formula, rewrite_term, Cmp, DiffFormula, DiffTerm, JetError};
use tderiv::matroid::{delta_rank, AlgebraicEndo, AlgebraicMatroid, RankOracle};
use tderiv::parse::{parse_formula, parse_series, parse_term, parse_term_or_formula, parse_theta_list, term_to_poly};
use tderiv::random::{self, rng};
use tderiv::series_models::{eval_diff_term, ModelError, SeriesPoint};
use tderiv::theta::{self, dickson_min, Theta, ThetaError};
use tderiv::{MultiPoly, PolyDerivation};

use crate::error::{CliError, EXIT_MATH};
use crate::input::{self, Func, Input};

/// Rendered result of a command. A nonzero `exit` marks a negative verdict
/// that is still reported as a regular result.
pub struct Output {
    pub text: String,
    pub result: Value,
    pub exit: u8,
}

impl Output {
    fn ok(text: impl Into<String>, result: Value) -> Self {
        Output { text: text.into(), result, exit: 0 }
    }
}

type Res = Result<Output, CliError>;

fn jet_error(e: JetError) -> CliError {
    match e {
        JetError::ZeroDenominator => CliError::math("zero_denominator", e),
        JetError::QuantifierUnsupported => CliError::input("quantifier_unsupported", e),
        _ => CliError::input("invalid_term", e),
    }
}

fn coherence_error(e: CoherenceError) -> CliError {
    match e {
        CoherenceError::NotCoherent(_) => CliError::math("not_coherent", e),
        CoherenceError::SingularInitialData(_) => CliError::math("singular_initial_data", e),
        CoherenceError::WitnessFails(_) => CliError::math("witness_fails", e),
        _ => CliError::input("invalid_condition", e),
    }
}

fn theta_error(e: ThetaError) -> CliError {
    CliError::input("invalid_theta", e)
}

fn seeded_or(input: &Input, seed: Option<u64>, gen: impl FnOnce(u64) -> String) -> Result<String, CliError> {
    match (input.read()?, seed) {
        (Some(s), _) => Ok(s),
        (None, Some(seed)) => Ok(gen(seed)),
        (None, None) => input.require(),
    }
}

fn depth_json(d: &BTreeMap<String, u32>) -> Value {
    json!(d)
}

pub fn rewrite(input: &Input, p: usize, seed: Option<u64>) -> Res {
    let src = seeded_or(input, seed, |s| random::diff_term(&mut rng(s), 4, &["x", "y"], p).to_string())?;
    match parse_term_or_formula(&src)? {
        Ok(t) => {
            let jt = rewrite_term(&t, p).map_err(jet_error)?;
            let m = jt.max_depth();
            Ok(Output::ok(
                format!("{jt}, m={m}"),
                json!({ "input": src, "kind": "term", "normal_form": jt.to_string(), "m": m, "depth": depth_json(&jt.depth()) }),
            ))
        }
        Err(phi) => {
            let rf = rewrite_formula(&phi, p).map_err(jet_error)?;
            let m = rf.max_depth();
            Ok(Output::ok(
                format!("{}, m={m}", rf.formula),
                json!({ "input": src, "kind": "formula", "normal_form": rf.formula.to_string(), "m": m, "depth": depth_json(&rf.depth) }),
            ))
        }
    }
}

pub fn lie(input: &Input) -> Res {
    let src = input.require()?;
    let parts: Vec<&str> = src.split(';').collect();
    let [a, b] = parts[..] else {
        return Err(CliError::input("invalid_input", "expected two derivations separated by `;`"));
    };
    let (mut da, mut db) = (input::derivation(&src, a)?, input::derivation(&src, b)?);
    // Generators missing on one side are sent to zero there.
    for v in da.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>() {
        if !db.iter().any(|(w, _)| *w == v) {
            db.push((v, Func::zero()));
        }
    }
    for v in db.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>() {
        if !da.iter().any(|(w, _)| *w == v) {
            da.push((v, Func::zero()));
        }
    }
    let (d1, d2) = (PolyDerivation::from_pairs(da), PolyDerivation::from_pairs(db));
    let br = d1.lie_bracket(&d2).map_err(|e| CliError::input("invalid_derivation", e))?;
    let commuting = br.is_zero();
    let images: BTreeMap<String, String> = br.images().iter().map(|(v, r)| (v.clone(), r.to_string())).collect();
    let mut text = format!("[D1, D2] = {br}");
    if commuting {
        text.push_str("\ncommuting");
    }
    Ok(Output::ok(text, json!({ "bracket": images, "commuting": commuting })))
}

fn conflict_json(c: &Conflict) -> Value {
    json!({
        "theta": c.theta.exps(),
        "via1": c.phi1.exps(),
        "value1": c.value1.to_string(),
        "via2": c.phi2.exps(),
        "value2": c.value2.to_string(),
    })
}

fn condition(input: &Input, seed: Option<u64>) -> Result<Condition, CliError> {
    let src = seeded_or(input, seed, |s| {
        random::coherent_condition(&mut rng(s), 1 + (s % 3) as usize, 2, 2).to_string()
    })?;
    Ok(parse_condition(&src)?)
}

pub fn coherence_check(input: &Input, ord: Option<u32>, seed: Option<u64>) -> Res {
    let c = condition(input, seed)?;
    let report = is_coherent(&c).map_err(coherence_error)?;
    let mut conflict = report.conflict;
    if conflict.is_none() {
        if let Some(k) = ord {
            conflict = strong_coherence_probe(&c, k).map_err(coherence_error)?;
        }
    }
    let result = json!({
        "coherent": report.coherent,
        "probe_ord": ord,
        "conflict": conflict.as_ref().map(conflict_json),
    });
    Ok(match conflict {
        None => {
            let text = match ord {
                Some(k) => format!("coherent\nno conflict up to ord {k}"),
                None => "coherent".into(),
            };
            Output::ok(text, result)
        }
        Some(c) => Output { text: c.to_string(), result, exit: EXIT_MATH },
    })
}

pub fn coherence_solve(input: &Input, deg: u32, seed: Option<u64>) -> Res {
    let c = condition(input, seed)?;
    let a = solve_condition_series(&c, deg).map_err(coherence_error)?;
    if let Some(f) = verify_solution(&c, &a) {
        return Err(CliError::math("verify_failed", f));
    }
    let mut lines = Vec::new();
    let mut coeffs = Vec::new();
    for t in theta::enumerate(c.p, deg) {
        let v = fmt_rational(&a.coeff(t.exps()));
        lines.push(format!("{t}: {v}"));
        coeffs.push(json!({ "exponents": t.exps(), "value": v }));
    }
    Ok(Output::ok(lines.join("\n"), json!({ "order": deg, "coefficients": coeffs, "series": a.to_string() })))
}

fn singer_src(input: &Input, seed: Option<u64>) -> Result<tderiv::codf::SingerInstance, CliError> {
    let src = seeded_or(input, seed, |s| random::singer_instance(&mut rng(s), 3, 2).to_string())?;
    Ok(parse_singer(&src)?)
}

pub fn singer_check(input: &Input, seed: Option<u64>) -> Res {
    let s = singer_src(input, seed)?;
    let report = check_singer_premise(&s);
    let geometric = (s.n > 0).then(|| singer_to_geometric(&s).to_string());
    let mut text = report.to_string();
    if let Some(g) = &geometric {
        text.push_str(&format!("\ngeometric form: {g}"));
    }
    let failures: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
    let result = json!({ "holds": report.holds(), "failures": failures, "geometric": geometric });
    Ok(Output { text, result, exit: if report.holds() { 0 } else { EXIT_MATH } })
}

pub fn singer_solve(input: &Input, deg: usize, seed: Option<u64>) -> Res {
    let s = singer_src(input, seed)?;
    let b = solve_singer_formal(&s, deg).map_err(|e| match e {
        CodfError::PremiseFails(_) => CliError::math("premise_fails", e),
        _ => CliError::input("invalid_instance", e),
    })?;
    if !singer_residual(&s, &b).is_zero() {
        return Err(CliError::math("residual_nonzero", "the truncated solution leaves a nonzero residual"));
    }
    let coeffs: Vec<String> = (0..=deg as u32).map(|k| fmt_rational(&b.coeff(&[k]))).collect();
    Ok(Output::ok(coeffs.join(", "), json!({ "order": deg, "coefficients": coeffs, "series": b.to_string() })))
}

pub fn rank(input: &Input, delta: Option<&str>, ord: Option<u32>) -> Res {
    let src = input.require()?;
    let (a_src, b_src) = match src.split_once('|') {
        Some((a, b)) => (a, b),
        None => (src.as_str(), &src[src.len()..]),
    };
    let (a, b) = (input::func_list(&src, a_src)?, input::func_list(&src, b_src)?);
    let Some(d) = delta else {
        let mut vars: Vec<String> = a.iter().chain(&b).flat_map(|f| f.variables()).collect();
        vars.sort();
        vars.dedup();
        let r = AlgebraicMatroid::new(vars).exact().rank(&a, &b);
        return Ok(Output::ok(format!("rank {r}"), json!({ "rank": r })));
    };
    let images = input::derivation(d, d)?;
    let endo = AlgebraicEndo::new(PolyDerivation::from_pairs(images));
    let universe = endo.derivation.universe();
    if let Some(v) = a.iter().chain(&b).flat_map(|f| f.variables()).find(|v| !universe.contains(v)) {
        return Err(CliError::input("invalid_derivation", format!("no image given for {v}")));
    }
    let k_max = ord.unwrap_or(6) as usize;
    let dr = delta_rank(&endo, &a, &b, k_max, 3.min(k_max + 1)).map_err(|e| CliError::math("rank", e))?;
    let incs: Vec<String> = dr.increments.iter().map(ToString::to_string).collect();
    let text = format!(
        "delta-rank {} (increments {}, {})",
        dr.value,
        incs.join(" "),
        if dr.stabilized { "stabilized" } else { "not stabilized" }
    );
    Ok(Output::ok(text, json!({ "delta_rank": dr.value, "increments": dr.increments, "stabilized": dr.stabilized })))
}

fn theta_strings(ts: &[Theta]) -> Vec<String> {
    ts.iter().map(ToString::to_string).collect()
}

fn thetas(input: &Input) -> Result<Vec<Theta>, CliError> {
    let src = input.require()?;
    let ts = parse_theta_list(&src)?;
    if ts.is_empty() {
        return Err(CliError::input("missing_input", "expected at least one theta"));
    }
    let p = ts[0].p();
    if let Some(t) = ts.iter().find(|t| t.p() != p) {
        return Err(theta_error(ThetaError::ArityMismatch { expected: p, found: t.p() }));
    }
    Ok(ts)
}

fn theta_out(ts: Vec<Theta>) -> Output {
    let s = theta_strings(&ts);
    Output::ok(s.join(" "), json!({ "thetas": s }))
}

pub fn theta_min(input: &Input) -> Res {
    let ts = thetas(input)?;
    let min = dickson_min(ts[0].p(), &ts).map_err(theta_error)?;
    // Minimal generators, listed in input order.
    let mut out: Vec<Theta> = Vec::new();
    for t in ts {
        if min.contains(&t) && !out.contains(&t) {
            out.push(t);
        }
    }
    Ok(theta_out(out))
}

pub fn theta_cmp(input: &Input) -> Res {
    let ts = thetas(input)?;
    let [a, b] = &ts[..] else {
        return Err(CliError::input("invalid_input", "expected exactly two thetas"));
    };
    let order = match a.cmp(b) {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    let div = match (a.divides(b), b.divides(a)) {
        (true, true) => "equal",
        (true, false) => "divides",
        (false, true) => "divided by",
        (false, false) => "incomparable",
    };
    Ok(Output::ok(format!("{a} {order} {b}; divisibility: {div}"), json!({ "order": order, "divisibility": div })))
}

pub fn theta_join(input: &Input) -> Res {
    let ts = thetas(input)?;
    Ok(theta_out(vec![ts.iter().skip(1).fold(ts[0].clone(), |a, b| a.join(b))]))
}

pub fn theta_meet(input: &Input) -> Res {
    let ts = thetas(input)?;
    Ok(theta_out(vec![ts.iter().skip(1).fold(ts[0].clone(), |a, b| a.meet(b))]))
}

pub fn theta_pred(input: &Input) -> Res {
    let ts = thetas(input)?;
    let [t] = &ts[..] else {
        return Err(CliError::input("invalid_input", "expected exactly one theta"));
    };
    Ok(theta_out(t.predecessors()))
}

pub fn theta_enum(p: usize, ord: u32) -> Res {
    if p == 0 {
        return Err(CliError::input("invalid_input", "p must be at least 1"));
    }
    Ok(theta_out(theta::enumerate(p, ord)))
}

pub fn delta_dim(input: &Input) -> Res {
    let src = input.require()?;
    let ct: CellTypeMatrix = src.parse().map_err(|e| CliError::input("invalid_matrix", e))?;
    let t = delta_type(&ct);
    Ok(Output::ok(t.to_string(), json!({ "type": t.bold, "dim": t.dim })))
}

fn conjuncts(phi: &DiffFormula, out: &mut Vec<(MultiPoly<String>, Cmp)>) -> Result<(), CliError> {
    let var = |t: &DiffTerm| match t {
        DiffTerm::Var(v) => Some(v.clone()),
        _ => None,
    };
    match phi {
        DiffFormula::Bool(true) => {}
        DiffFormula::Bool(false) => out.push((MultiPoly::one(), Cmp::Lt)),
        DiffFormula::And(fs) => fs.iter().try_for_each(|f| conjuncts(f, out))?,
        DiffFormula::Atom { lhs, cmp, rhs } => {
            let p = |t: &DiffTerm| term_to_poly(t, &var).map_err(|m| CliError::input("invalid_constraint", m));
            out.push((&p(lhs)? - &p(rhs)?, *cmp));
        }
        _ => return Err(CliError::input("invalid_constraint", "only conjunctions of sign conditions are supported")),
    }
    Ok(())
}

pub fn decide1(input: &Input, seed: Option<u64>) -> Res {
    let src = seeded_or(input, seed, |s| {
        format!("{} > 0", from_unipoly(&random::unipoly(&mut rng(s), 6, 10), "x".to_string()))
    })?;
    let phi = parse_formula(&src)?;
    let mut cs = Vec::new();
    conjuncts(&phi, &mut cs)?;
    let d = sturm_decide(&cs).map_err(|e| CliError::input("invalid_constraint", e))?;
    let witness = match &d {
        Decision::Unsat => Value::Null,
        Decision::Sat(SatWitness::Point(q)) => json!({ "point": fmt_rational(q) }),
        Decision::Sat(SatWitness::Root { poly, lo, hi }) => {
            json!({ "root_of": poly.to_string(), "lo": fmt_rational(lo), "hi": fmt_rational(hi) })
        }
    };
    Ok(Output::ok(d.to_string(), json!({ "sat": d.is_sat(), "witness": witness })))
}

pub fn eval(input: &Input, at: &[String]) -> Res {
    let src = input.require()?;
    let t = parse_term(&src)?;
    let mut values = Vec::new();
    for a in at {
        let Some((name, s)) = a.split_once('=') else {
            return Err(CliError::input("invalid_input", format!("expected `<name> = <series>` in `{a}`")));
        };
        values.push((name.trim().to_string(), parse_series(s.trim())?));
    }
    let Some((_, first)) = values.first() else {
        return Err(CliError::input("missing_input", "give at least one `--at <name>=<series>`"));
    };
    let order = values.iter().map(|(_, s)| s.order()).min().unwrap();
    let mut pt = SeriesPoint::new(first.nvars(), order);
    for (name, s) in values {
        pt.insert(&name, s.truncate(order)).map_err(|e| CliError::input("invalid_point", e))?;
    }
    let v = eval_diff_term(&t, &pt).map_err(|e| match e {
        ModelError::DivisionByNonUnit | ModelError::DivisionByZero => CliError::math("division", e),
        _ => CliError::input("invalid_point", e),
    })?;
    Ok(Output::ok(v.to_string(), json!({ "value": v.to_string(), "order": v.order() })))
}

pub fn witness_box(input: &Input) -> Res {
    let src = input.require()?;
    let bx = input::intervals(&src)?;
    let a = jet_box_witness(&bx).map_err(|e| CliError::input("invalid_box", e))?;
    let jet: Vec<String> = jet_at_zero(&a, bx.len() - 1).iter().map(fmt_rational).collect();
    Ok(Output::ok(
        format!("a(t) = {a}\njet at 0: ({})", jet.join(", ")),
        json!({ "witness": a.to_string(), "jet": jet }),
    ))
}
