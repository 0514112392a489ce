//! Commands of the `bautin-arcs` tool. Each command takes already-read file
//! contents and returns a [`RunReport`] with an [`Status`] that decides the
//! exit code.

use serde::Serialize;
use serde_json::{json, Value};

use bautin_core::aksing::{ak_classify, ak_essential_set, ak_ideal};
use bautin_core::blowup::{fiber_dimension_sample, order_of_arc, ArcSampler, Ideal};
use bautin_core::exactalg::{
    dulac_limit, dulac_shift_family, dulac_unit_family, is_exact, parse_poly, q4_form, rat, OneForm,
};
use bautin_core::io::{
    arc_from_json, arc_to_json, family_spec_from_json, family_spec_to_json, ideal_from_json,
    ideal_to_json, kapteyn_arc_from_json, order_report,
};
use bautin_core::kapteyn::{
    classify_stratum, closure_cases, closure_check, delta_sweep, essential_family,
    localized_generators, tampered_suite, FamilySampler, ESSENTIAL_FAMILIES,
};
use bautin_core::numeric::{
    measure_order, zoladek_degree_check, zoladek_fit, Precision, ReturnMapSample,
};
use bautin_core::{Arc, Error, Poly, DEFAULT_TRUNCATION, VERSION};

/// Outcome class of a command, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The arc lies in the zero set to truncation, or every displacement is
    /// below the noise floor.
    Undetermined,
    /// A built-in check did not hold.
    CheckFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Undetermined => 2,
            Status::CheckFailed => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub status: Status,
    /// Rows for `--csv`, when the command integrates return maps.
    pub samples: Vec<ReturnMapSample>,
}

/// Failure of a command before it could produce a report.
#[derive(Clone, Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: "input".into(),
            message: message.into(),
            exit_code: 1,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage".into(),
            message: message.into(),
            exit_code: 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::Undetermined(_) | Error::BelowNoise(_) => 2,
            _ => 1,
        };
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
            exit_code,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn report(command: &str, inputs: Value, outputs: Value, seed: Option<u64>) -> RunReport {
    RunReport {
        command: command.into(),
        inputs,
        outputs,
        seed,
        tool_version: VERSION.into(),
    }
}

fn outcome(report: RunReport, status: Status) -> Outcome {
    Outcome {
        report,
        status,
        samples: Vec::new(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Where an arc comes from: an explicit arc file or a family spec.
#[derive(Clone, Debug)]
pub enum ArcInput {
    Arc(String),
    Family(String),
}

struct LoadedArc {
    arc: Arc,
    echo: Value,
    /// Generators localized at the family's base point.
    family_ideal: Option<Ideal>,
}

fn load_arc(input: &ArcInput, kapteyn: bool) -> CliResult<LoadedArc> {
    match input {
        ArcInput::Arc(text) => {
            let arc = if kapteyn {
                kapteyn_arc_from_json(text)?
            } else {
                arc_from_json(text)?
            };
            Ok(LoadedArc {
                echo: json!({ "arc": arc_to_json(&arc) }),
                arc,
                family_ideal: None,
            })
        }
        ArcInput::Family(text) => {
            let spec = family_spec_from_json(text)?;
            let arc = essential_family(&spec, DEFAULT_TRUNCATION)?;
            Ok(LoadedArc {
                echo: json!({ "family": family_spec_to_json(&spec), "arc": arc_to_json(&arc) }),
                arc,
                family_ideal: Some(localized_generators(classify_stratum(&spec.base))?),
            })
        }
    }
}

/// Order and exceptional point of an arc. Without an ideal file a family
/// spec is measured against the generators localized at its base point.
pub fn cmd_order(ideal: Option<&str>, arc: &ArcInput) -> CliResult<Outcome> {
    let loaded = load_arc(arc, false)?;
    let ideal = match (ideal, loaded.family_ideal) {
        (Some(text), _) => ideal_from_json(text)?,
        (None, Some(i)) => i,
        (None, None) => {
            return Err(CliError::input(
                "`order` needs --ideal unless the arc comes from --family",
            ))
        }
    };
    let r = order_of_arc(&ideal, &loaded.arc)?;
    let status = if r.order.is_some() {
        Status::Ok
    } else {
        Status::Undetermined
    };
    let mut inputs = loaded.echo;
    inputs["ideal"] = ideal_to_json(&ideal);
    Ok(outcome(
        report("order", inputs, order_report(&r), None),
        status,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub stratum: String,
    pub families: Vec<String>,
    /// Projective dimension of the span of sampled exceptional points.
    pub dimension: i64,
    /// `N − 1` for the `N` localized generators.
    pub ambient_dimension: i64,
    pub rank: usize,
    pub samples: usize,
    pub undetermined: usize,
    pub orders: Value,
}

/// Sampled exceptional fibers over every stratum of the center set.
pub fn cmd_tables(seed: u64, trials: usize) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    for (stratum, families) in ESSENTIAL_FAMILIES {
        let ideal = localized_generators(stratum)?;
        let samplers: Vec<FamilySampler> =
            families.iter().map(|f| FamilySampler::new(*f)).collect();
        let refs: Vec<&dyn ArcSampler> = samplers.iter().map(|s| s as &dyn ArcSampler).collect();
        let fs = fiber_dimension_sample(&ideal, &refs, trials, seed)?;
        rows.push(TableRow {
            stratum: stratum.to_string(),
            families: families.iter().map(|f| f.to_string()).collect(),
            dimension: fs.dimension,
            ambient_dimension: ideal.len() as i64 - 1,
            rank: fs.rank,
            samples: fs.samples,
            undetermined: fs.undetermined,
            orders: to_value(&fs.orders),
        });
    }
    let inputs = json!({ "trials": trials });
    Ok(outcome(
        report("tables", inputs, json!({ "rows": rows }), Some(seed)),
        Status::Ok,
    ))
}

/// Closure relations between families: every witness on `draws` members,
/// a `δ` sweep over `{1, 1/2, 1/4}`, and a tampered negative control that
/// must fail.
pub fn cmd_closures(seed: u64, draws: usize) -> CliResult<Outcome> {
    let n = DEFAULT_TRUNCATION;
    let cases = closure_cases(seed, draws, n)?;
    let deltas = [rat(1, 1), rat(1, 2), rat(1, 4)];
    let mut checks = Vec::new();
    let mut all = true;
    for (w, spec) in &cases {
        let c = closure_check(w, spec, n)?;
        let sweep = delta_sweep(w, spec, &deltas)?;
        let swept = sweep.iter().all(|r| r.consistent);
        all &= c.pass && swept;
        checks.push(json!({
            "check": to_value(&c),
            "sweep": to_value(&sweep),
            "sweep_consistent": swept,
            "lower_member": family_spec_to_json(spec),
        }));
    }
    let controls = tampered_suite(seed, n)?;
    let rejected = controls.iter().all(|c| !c.pass);
    let outputs = json!({
        "checks": checks,
        "all_pass": all,
        "tampered_controls": to_value(&controls),
        "tampered_rejected": rejected,
    });
    let status = if all && rejected {
        Status::Ok
    } else {
        Status::CheckFailed
    };
    Ok(outcome(
        report("closures", json!({ "draws": draws }), outputs, Some(seed)),
        status,
    ))
}

/// Component, order and center of one arc for `(x, y^{k+1})`.
pub fn cmd_ak(k: u32, arc: &str) -> CliResult<Outcome> {
    let arc = arc_from_json(arc)?;
    let ideal = ak_ideal(k)?;
    let r = order_of_arc(&ideal, &arc)?;
    let inputs = json!({ "k": k, "arc": arc_to_json(&arc) });
    if r.order.is_none() {
        let out =
            json!({ "component": null, "order": null, "point": null, "truncation": r.truncation });
        return Ok(outcome(
            report("ak", inputs, out, None),
            Status::Undetermined,
        ));
    }
    let c = ak_classify(k, &arc)?;
    let out = json!({
        "component": c.index,
        "generic": c.generic,
        "order": r.order,
        "point": r.point(),
        "truncation": r.truncation,
    });
    Ok(outcome(report("ak", inputs, out, None), Status::Ok))
}

/// The minimal essential set for `(x, y^{k+1})` with its sampled centers.
pub fn cmd_ak_essential(k: u32, trials: usize, seed: u64) -> CliResult<Outcome> {
    let e = ak_essential_set(k, trials, seed)?;
    let status = if e.components == [k + 1] {
        Status::Ok
    } else {
        Status::CheckFailed
    };
    Ok(outcome(
        report(
            "ak",
            json!({ "k": k, "trials": trials }),
            to_value(&e),
            Some(seed),
        ),
        status,
    ))
}

fn precision(quad: bool) -> Precision {
    if quad {
        Precision::Quad
    } else {
        Precision::Double
    }
}

/// Numerical `ε`-order of the displacement along a Kapteyn arc.
pub fn cmd_melnikov(
    arc: &ArcInput,
    eps_list: Option<&[f64]>,
    h_list: &[f64],
    quad: bool,
) -> CliResult<Outcome> {
    let loaded = load_arc(arc, true)?;
    let p = precision(quad);
    let ideal = match loaded.family_ideal {
        Some(i) => i,
        None => {
            let base: Vec<_> = bautin_core::kapteyn::VARS
                .iter()
                .map(|v| loaded.arc.get(v).map(|j| j.coeff(0)).unwrap_or_default())
                .collect();
            let base: [_; 6] = base.try_into().expect("six coordinates");
            localized_generators(classify_stratum(&base)).map_err(|e| {
                CliError::input(format!("arc is not centered on the center set: {e}"))
            })?
        }
    };
    let algebraic = order_of_arc(&ideal, &loaded.arc)?.order;
    let mut inputs = loaded.echo;
    inputs["h_list"] = json!(h_list);
    inputs["eps_list"] = json!(eps_list);
    inputs["precision"] = to_value(&p);
    let fit = match measure_order(&loaded.arc, h_list, eps_list, p) {
        Ok(f) => f,
        Err(Error::BelowNoise(m)) => {
            let out = json!({ "below_noise": m, "algebraic_order": algebraic });
            return Ok(outcome(
                report("melnikov", inputs, out, None),
                Status::Undetermined,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let samples = fit.samples.clone();
    let mut out = to_value(&fit);
    out["algebraic_order"] = json!(algebraic);
    out["agrees"] = json!(algebraic == Some(fit.measured_order));
    Ok(Outcome {
        report: report("melnikov", inputs, out, None),
        status: Status::Ok,
        samples,
    })
}

/// Degree-four fit of the leading displacement coefficient of an arc
/// through the linear center, with the `h⁵` refit.
pub fn cmd_zoladek(arc: &ArcInput, eps: f64, h_list: &[f64], quad: bool) -> CliResult<Outcome> {
    let loaded = load_arc(arc, true)?;
    let p = precision(quad);
    let mut inputs = loaded.echo;
    inputs["eps"] = json!(eps);
    inputs["h_list"] = json!(h_list);
    inputs["precision"] = to_value(&p);
    let fit = zoladek_fit(&loaded.arc, eps, h_list, p)?;
    if fit.order.is_none() {
        return Ok(outcome(
            report("zoladek", inputs, to_value(&fit), None),
            Status::Undetermined,
        ));
    }
    let degree = zoladek_degree_check(&loaded.arc, eps, h_list, p)?;
    let out = json!({ "fit": to_value(&fit), "degree_check": to_value(&degree) });
    Ok(outcome(report("zoladek", inputs, out, None), Status::Ok))
}

/// `P` and `Q` printed over `x, y` followed by any parameters.
fn form_json(w: &OneForm) -> Value {
    let mut vars = vec!["x".to_string(), "y".to_string()];
    let mut rest: Vec<String> =
        w.p.vars()
            .iter()
            .chain(w.q.vars())
            .filter(|v| !vars.contains(v))
            .cloned()
            .collect();
    rest.sort();
    rest.dedup();
    vars.extend(rest);
    let show = |p: &Poly| {
        p.align(&vars)
            .expect("variables collected above")
            .to_string()
    };
    json!({ "P": show(&w.p), "Q": show(&w.q) })
}

fn xy(text: &str) -> Poly {
    parse_poly(text, None).expect("built-in polynomial")
}

/// Exactness, the `Q₄` form degree, and the two limit constructions.
pub fn cmd_dulac() -> CliResult<Outcome> {
    let mut exact = Vec::new();
    let mut ok = true;
    let cases = [
        ("d(x^3 + y^3)", OneForm::d(&xy("x^3 + y^3")), true),
        ("y dx", OneForm::new(xy("y"), xy("0")), false),
        (
            "Hamiltonian triangle, dz/dt = -iz + conj(z)^2",
            OneForm::new(xy("-x - 2*x*y"), xy("-y - x^2 + y^2")),
            true,
        ),
    ];
    for (name, w, expected) in cases {
        let e = is_exact(&w);
        let primitive_ok = match &e.primitive {
            Some(f) => OneForm::d(f) == w,
            None => true,
        };
        let pass = e.closed == expected && primitive_ok;
        ok &= pass;
        exact.push(json!({
            "form": name,
            "closed": e.closed,
            "primitive": e.primitive.map(|f| f.to_string()),
            "pass": pass,
        }));
    }
    let q4 = q4_form(&Poly::var("alpha"));
    ok &= q4.degree == 2 && q4.residual.is_empty();
    let q4_json = json!({
        "form": form_json(&q4.form),
        "degree": q4.degree,
        "residual": q4.residual.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    let mut limits = Vec::new();
    let one = rat(1, 1);
    for (case, (family, target)) in [
        (
            "d",
            dulac_unit_family(&xy("x"), &xy("y"), &xy("x + y"), &one, &one),
        ),
        (
            "e",
            dulac_shift_family(&xy("x"), &xy("y"), &xy("x"), &one, &one),
        ),
    ] {
        let r = dulac_limit(&family, &target)?;
        ok &= r.matches;
        limits.push(json!({
            "case": case,
            "limit": form_json(&r.limit),
            "target": form_json(&target),
            "matches": r.matches,
        }));
    }
    let out = json!({ "exactness": exact, "q4": q4_json, "limits": limits, "all_pass": ok });
    let status = if ok { Status::Ok } else { Status::CheckFailed };
    Ok(outcome(report("dulac", json!({}), out, None), status))
}

/// Comma-separated positive floats.
pub fn parse_float_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("{what}: `{}` is not a number", s.trim())))
        })
        .collect::<CliResult<_>>()?;
    if v.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(CliError::input(format!("{what}: values must be positive")));
    }
    Ok(v)
}

/// CSV rows of return-map samples.
pub fn samples_csv(samples: &[ReturnMapSample]) -> String {
    let mut s = String::from("h,epsilon,displacement,integrator_error_estimate\n");
    for r in samples {
        s.push_str(&format!(
            "{:e},{:e},{:e},{:e}\n",
            r.h, r.epsilon, r.displacement, r.integrator_error_estimate
        ));
    }
    s
}

/// Worker count from `BAUTIN_ARCS_THREADS`, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("BAUTIN_ARCS_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input(format!(
                "BAUTIN_ARCS_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}
