//! JSON files: arcs, ideals, family members and order reports.
//!
//! Rationals are written as strings `"p"` or `"p/q"`; integer JSON numbers
//! are also accepted on input. Errors in a literal are reported with the line
//! and column of the literal in the file.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::blowup::{Ideal, OrderResult};
use crate::error::{line_col, Error, Result};
use crate::exactalg::{parse_poly, parse_rational, Poly, Rational};
use crate::jets::{Arc, Jet};
use crate::kapteyn::{default_base, FamilyId, FamilySpec, VARS};

fn from_serde(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column().max(1),
        message: {
            let m = e.to_string();
            match m.rfind(" at line ") {
                Some(i) => m[..i].to_string(),
                None => m,
            }
        },
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(from_serde)
}

/// Byte offset of the first occurrence of `needle` as a JSON string or bare token.
fn locate(text: &str, needle: &str) -> usize {
    let quoted = format!("\"{needle}\"");
    text.find(&quoted)
        .map(|p| p + 1)
        .or_else(|| text.find(needle))
        .unwrap_or(0)
}

/// Re-anchors an error from parsing `lit` on its own at the literal's
/// position inside `text`.
fn anchor(text: &str, lit: &str, e: Error) -> Error {
    let start = locate(text, lit);
    match e {
        Error::Parse {
            line: 1,
            column,
            message,
        } => {
            let (line, column) = line_col(text, start + column - 1);
            Error::Parse {
                line,
                column,
                message,
            }
        }
        Error::Parse { message, .. } | Error::Invalid(message) => {
            let (line, column) = line_col(text, start);
            Error::Parse {
                line,
                column,
                message,
            }
        }
        other => {
            let (line, column) = line_col(text, start);
            Error::Parse {
                line,
                column,
                message: other.to_string(),
            }
        }
    }
}

fn at(text: &str, needle: &str, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, locate(text, needle));
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn rational_value(text: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| anchor(text, s, e)),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map_err(|e| anchor(text, &n.to_string(), e))
        }
        Value::Number(n) => Err(at(
            text,
            &n.to_string(),
            format!("`{n}` is not exact; write rationals as \"p/q\" strings"),
        )),
        other => Err(at(
            text,
            &other.to_string(),
            format!("expected a rational, got {other}"),
        )),
    }
}

fn object<'a>(text: &str, v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse_at(text, 0, format!("{what} must be a JSON object")))
}

fn strings(text: &str, v: &Value, key: &str) -> Result<Vec<String>> {
    let arr = v
        .as_array()
        .ok_or_else(|| at(text, key, format!("`{key}` must be a list")))?;
    arr.iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| at(text, key, format!("`{key}` entries must be strings")))
        })
        .collect()
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn arc_to_json(arc: &Arc) -> Value {
    let vars: Map<String, Value> = arc
        .vars()
        .map(|(k, j)| (k.clone(), j.coeffs().iter().map(rational_to_json).collect()))
        .collect();
    json!({ "truncation": arc.truncation(), "vars": vars })
}

/// Reads `{"truncation": N, "vars": {"l1": ["c0", "c1", ...], ...}}`.
/// Shorter coefficient lists are padded with zeros.
pub fn arc_from_json(text: &str) -> Result<Arc> {
    let v = parse_json(text)?;
    arc_from_value(text, &v)
}

fn arc_from_value(text: &str, v: &Value) -> Result<Arc> {
    let obj = object(text, v, "arc")?;
    let n = obj
        .get("truncation")
        .ok_or_else(|| Error::parse_at(text, 0, "arc needs a `truncation`"))?
        .as_u64()
        .ok_or_else(|| {
            at(
                text,
                "truncation",
                "`truncation` must be a nonnegative integer",
            )
        })? as usize;
    let vars = obj
        .get("vars")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse_at(text, 0, "arc needs a `vars` object"))?;
    let mut arc = Arc::new(n);
    for (name, coeffs) in vars {
        let list = coeffs.as_array().ok_or_else(|| {
            at(
                text,
                name,
                format!("coefficients of `{name}` must be a list"),
            )
        })?;
        if list.len() > n + 1 {
            return Err(at(
                text,
                name,
                format!(
                    "`{name}` has {} coefficients but truncation {n} keeps {}",
                    list.len(),
                    n + 1
                ),
            ));
        }
        let c = list
            .iter()
            .map(|x| rational_value(text, x))
            .collect::<Result<Vec<_>>>()?;
        arc.set(name, Jet::new(c, n));
    }
    Ok(arc)
}

/// Reads `{"vars": [...], "generators": [...], "factored_generators": [[...], ...]}`.
/// Without `vars` the variables are taken in order of appearance.
pub fn ideal_from_json(text: &str) -> Result<Ideal> {
    let v = parse_json(text)?;
    let obj = object(text, &v, "ideal")?;
    let declared = obj
        .get("vars")
        .map(|v| strings(text, v, "vars"))
        .transpose()?;
    let mut texts: Vec<Vec<String>> = Vec::new();
    if let Some(g) = obj.get("generators") {
        texts.extend(strings(text, g, "generators")?.into_iter().map(|s| vec![s]));
    }
    if let Some(g) = obj.get("factored_generators") {
        let arr = g.as_array().ok_or_else(|| {
            at(
                text,
                "factored_generators",
                "`factored_generators` must be a list of lists",
            )
        })?;
        for f in arr {
            texts.push(strings(text, f, "factored_generators")?);
        }
    }
    if texts.is_empty() {
        return Err(at(text, "generators", "the generator list is empty"));
    }
    let parse =
        |s: &String, vars: Option<&[String]>| parse_poly(s, vars).map_err(|e| anchor(text, s, e));
    let vars = match declared {
        Some(v) => v,
        None => {
            let mut seen: Vec<String> = Vec::new();
            for s in texts.iter().flatten() {
                for name in parse(s, None)?.vars() {
                    if !seen.contains(name) {
                        seen.push(name.clone());
                    }
                }
            }
            seen
        }
    };
    let mut gens = Vec::with_capacity(texts.len());
    for factors in &texts {
        let mut g = Poly::constant(Rational::from_integer(1.into()));
        for s in factors {
            g = &g * &parse(s, Some(&vars))?;
        }
        gens.push(g.align(&vars)?);
    }
    Ideal::new(vars, gens).map_err(|e| at(text, "generators", e.to_string()))
}

pub fn ideal_to_json(ideal: &Ideal) -> Value {
    json!({
        "vars": ideal.vars(),
        "generators": ideal.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    })
}

/// Reads `{"family": "I13_A", "base": [...], "symbols": {...}, "delta": "1/2"}`;
/// `base` defaults to the built-in point of the family's stratum.
pub fn family_spec_from_json(text: &str) -> Result<FamilySpec> {
    let v = parse_json(text)?;
    let obj = object(text, &v, "family spec")?;
    let id = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse_at(text, 0, "family spec needs a `family` string"))?;
    let family = FamilyId::parse(id).map_err(|e| anchor(text, id, e))?;
    let base = match obj.get("base") {
        None => default_base(family.stratum()),
        Some(b) => {
            let arr = b
                .as_array()
                .filter(|a| a.len() == 6)
                .ok_or_else(|| at(text, "base", "`base` must list the six parameters l1..l6"))?;
            let v = arr
                .iter()
                .map(|x| rational_value(text, x))
                .collect::<Result<Vec<_>>>()?;
            v.try_into().expect("length checked")
        }
    };
    let mut symbols = BTreeMap::new();
    if let Some(s) = obj.get("symbols") {
        let m = s
            .as_object()
            .ok_or_else(|| at(text, "symbols", "`symbols` must be an object"))?;
        for (k, x) in m {
            symbols.insert(k.clone(), rational_value(text, x)?);
        }
    }
    let delta = obj
        .get("delta")
        .map(|d| rational_value(text, d))
        .transpose()?;
    Ok(FamilySpec {
        family,
        base,
        symbols,
        delta,
    })
}

pub fn family_spec_to_json(spec: &FamilySpec) -> Value {
    let mut v = json!({
        "family": spec.family.as_str(),
        "base": spec.base.iter().map(rational_to_json).collect::<Vec<_>>(),
        "symbols": spec.symbols.iter().map(|(k, v)| (k.clone(), rational_to_json(v))).collect::<Map<_, _>>(),
    });
    if let Some(d) = &spec.delta {
        v["delta"] = rational_to_json(d);
    }
    v
}

/// `{"order": k|null, "leading": [...], "point": [...]|null, "truncation": N}`.
pub fn order_report(r: &OrderResult) -> Value {
    json!({
        "order": r.order,
        "leading": r.leading.iter().map(rational_to_json).collect::<Vec<_>>(),
        "point": r.point().map(|p| p.to_strings()),
        "truncation": r.truncation,
    })
}

/// Variables `l1..l6` of a Kapteyn arc; missing ones are zero.
pub fn kapteyn_arc_from_json(text: &str) -> Result<Arc> {
    let mut arc = arc_from_json(text)?;
    for (name, _) in arc.vars() {
        if !VARS.contains(&name.as_str()) {
            return Err(at(text, name, format!("`{name}` is not one of l1..l6")));
        }
    }
    for v in VARS {
        if arc.get(v).is_none() {
            arc.set(v, Jet::zero(arc.truncation()));
        }
    }
    Ok(arc)
}
