use std::path::Path;
use std::sync::Arc;

use drinfeld::field::{prime_power, FieldCtx};
use drinfeld::level::{bound_generic_modules, bound_nq, bound_pairs, image_system, lift_count};
use drinfeld::mpoly::{field_json, MPoly};
use drinfeld::orders::{gamma_count, parse_a, parse_vector, poly_json, IdealPresentation, OrderSpec};
use drinfeld::selfisog::{enumerate_basic_j, g_to_mpoly, phi_self_t, phi_to_mpoly, DeltaChoice, JTuple};
use drinfeld::skew::commutation_system;
use drinfeld::sympoly::Equation;
use drinfeld::volcano::{
    branching_factor, build_volcano_with, count_affine_points, validate_volcano, CraterSpec, Preset, VolcanoGraph,
    VolcanoParams,
};
use drinfeld::{DrinfeldModule, Error, Poly, Pretty};
use serde_json::{json, Value};

use crate::{BoundKind, Cmd, FieldArgs, Format, VolcanoCmd};

pub enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

pub enum Output {
    Text(String),
    /// JSON, DOT and text renderings of one graph.
    Graph(VolcanoGraph),
    Both(Value, String),
}

impl Output {
    pub fn render(&self, f: Format) -> String {
        let json = |v: &Value| format!("{}\n", serde_json::to_string_pretty(v).expect("valid JSON"));
        match (self, f) {
            (Output::Text(s), _) => format!("{s}\n"),
            (Output::Graph(g), Format::Dot) => g.to_dot(),
            (Output::Graph(g), Format::Text) => {
                let sizes = g.level_sizes();
                let mut s = String::new();
                for (t, n) in sizes.iter().enumerate() {
                    s.push_str(&format!("level {t}: {n} vertices\n"));
                }
                s.push_str(&format!("edges: {}\n", g.edges.len()));
                s
            }
            (Output::Graph(g), Format::Json) => json(&g.to_json()),
            (Output::Both(_, t), Format::Text) => format!("{t}\n"),
            (Output::Both(v, _), _) => json(v),
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Res<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Failure::Usage(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn field(f: &FieldArgs) -> Res<Arc<FieldCtx>> {
    field_of(f.q, f.modulus.as_deref())
}

fn field_of(q: u64, modulus: Option<&str>) -> Res<Arc<FieldCtx>> {
    let Some(m) = modulus else {
        return Ok(FieldCtx::of_size(q)?);
    };
    let (p, e) = prime_power(q).ok_or_else(|| Failure::Usage(format!("{q} is not a prime power")))?;
    let p = u32::try_from(p).map_err(|_| Failure::Math(Error::TooLarge(format!("characteristic {p}"))))?;
    Ok(FieldCtx::new(p, e, Some(parse_list(m, "modulus")?))?)
}

fn poly_in_t(s: &str, ctx: &Arc<FieldCtx>) -> Res<Poly> {
    Ok(MPoly::parse(s, ctx, vec!["T"])?.to_nested(&["T"])?)
}

fn read_json(path: &Path) -> Res<Value> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Math(Error::Parse(format!("{}: {e}", path.display()))))
}

/// Integer coefficients of a polynomial in `T`, for symbolic `q`.
fn int_poly(s: &str) -> Res<Vec<i64>> {
    let bad = || Failure::Usage(format!("cannot read {s:?} as an integer polynomial in T"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (c, k) = match body.find('T') {
            None => (body.parse::<i64>().map_err(|_| bad())?, 0),
            Some(pos) => {
                let head = body[..pos].trim_end_matches('*');
                let c = if head.is_empty() {
                    1
                } else {
                    head.parse::<i64>().map_err(|_| bad())?
                };
                let tail = &body[pos + 1..];
                let k = match tail.strip_prefix('^') {
                    Some(e) => e.parse::<usize>().map_err(|_| bad())?,
                    None if tail.is_empty() => 1,
                    None => return Err(bad()),
                };
                (c, k)
            }
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] += sign * c;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return usage("a must be nonzero");
    }
    Ok(coeffs)
}

fn equations_json(eqs: &[Equation], ctx: Option<&Arc<FieldCtx>>) -> Res<Vec<Value>> {
    eqs.iter()
        .map(|e| {
            let mut v = e.to_json();
            if let Some(ctx) = ctx {
                let sides = e
                    .sides
                    .iter()
                    .map(|s| s.specialize(ctx).map(|m| m.to_json()))
                    .collect::<Result<Vec<_>, _>>()?;
                v["specialized"] = Value::Array(sides);
            }
            Ok(v)
        })
        .collect()
}

pub fn dispatch(cmd: &Cmd, format: Format) -> Res<Output> {
    if format == Format::Dot && !matches!(cmd, Cmd::Volcano { .. }) {
        return usage("--format dot is only available for volcano graphs");
    }
    match cmd {
        Cmd::Jinv { q, r } => {
            let js = enumerate_basic_j(*q, *r)?;
            let text = js
                .iter()
                .map(|j| {
                    format!(
                        "({}; {})",
                        j.delta.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
                        j.delta_r
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let v = json!({"q": q, "r": r, "tuples": js.iter().map(JTuple::to_json).collect::<Vec<_>>()});
            Ok(Output::Both(v, text))
        }
        Cmd::SelfisogT {
            field: fa,
            r,
            j,
            delta,
            emit_g,
        } => {
            let ctx = field(fa)?;
            let d: Vec<u64> = parse_list(j, "J exponent")?;
            if d.len() != *r {
                return usage(format!("--j needs {r} exponents including δ_r"));
            }
            let jt = JTuple::new(ctx.q(), *r, d[..r - 1].to_vec(), d[r - 1])?;
            let choice = if delta == "all" {
                DeltaChoice::All
            } else {
                let c = MPoly::parse(delta, &ctx, vec![])?.coeff(&[]);
                DeltaChoice::One(c)
            };
            let res = phi_self_t(&ctx, *r, &jt, &choice)?;
            let phi = phi_to_mpoly(&res.phi, &ctx)?;
            let mut v = json!({
                "field": field_json(&ctx),
                "r": r,
                "j": jt.to_json(),
                "degree": res.phi.deg(),
                "phi": phi.to_json(),
                "parts": res.parts.iter().map(|p| json!({
                    "delta": p.delta.to_string(),
                    "degree": p.phi.deg(),
                    "repeated_roots": p.g.repeated,
                    "constant_roots": !p.g.constant_roots.pass,
                })).collect::<Vec<_>>(),
                "shared_factors": res.shared,
            });
            let mut text = format!("Phi = {phi}");
            if *emit_g {
                let gs = res
                    .parts
                    .iter()
                    .map(|p| Ok(json!({"delta": p.delta.to_string(), "g": g_to_mpoly(&p.g.g, &ctx)?.to_json()})))
                    .collect::<Result<Vec<_>, Error>>()?;
                for p in &res.parts {
                    text.push_str(&format!("\ng(Delta={}, X) = {}", p.delta, g_to_mpoly(&p.g.g, &ctx)?));
                }
                v["g"] = Value::Array(gs);
            }
            Ok(Output::Both(v, text))
        }
        Cmd::Bound { which, q } => {
            let n = match which {
                BoundKind::Pairs => bound_pairs(*q)?,
                BoundKind::Nq => bound_nq(*q)?,
                BoundKind::Generic => bound_generic_modules(*q),
                BoundKind::Lift => lift_count(*q),
            };
            Ok(Output::Text(n.to_string()))
        }
        Cmd::PhiA {
            q,
            r,
            a,
            coeffs,
            symbolic,
            iso_deg,
            top_name,
            modulus,
        } => {
            let ctx = match q.as_str() {
                "any" => None,
                s => Some(field_of(
                    s.parse().map_err(|_| Failure::Usage(format!("bad --q {s:?}")))?,
                    modulus.as_deref(),
                )?),
            };
            if *symbolic {
                let ai = int_poly(a)?;
                let (vars, eqs) = match iso_deg {
                    Some(k) => {
                        let s = commutation_system(*r, *k, &ai, top_name)?;
                        (s.vars, s.equations)
                    }
                    None => {
                        let n = r * (ai.len() - 1);
                        let names: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
                        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                        image_system(*r, &ai, &refs)?
                    }
                };
                let text = eqs.iter().map(Equation::to_string).collect::<Vec<_>>().join("\n");
                let mut v = json!({"q": q, "vars": *vars, "equations": equations_json(&eqs, ctx.as_ref())?});
                if let Some(c) = &ctx {
                    v["field"] = field_json(c);
                }
                return Ok(Output::Both(v, text));
            }
            let Some(ctx) = ctx else {
                return usage("a numeric --q is needed unless --symbolic is given");
            };
            let Some(cs) = coeffs else {
                return usage("--coeffs g1,...,gr is needed unless --symbolic is given");
            };
            let g = cs.split(',').map(|s| poly_in_t(s, &ctx)).collect::<Res<Vec<_>>>()?;
            if g.len() != *r {
                return usage(format!("--coeffs needs {r} entries"));
            }
            let t = poly_in_t("T", &ctx)?;
            let phi = DrinfeldModule::new(t, g)?;
            let img = phi.image(&poly_in_t(a, &ctx)?)?;
            let conv = |c: &Poly| MPoly::from_nested(c, &ctx, &["T"], vec!["T"]);
            let v = json!({"field": field_json(&ctx), "r": r, "phi_a": img.to_json_with(conv)?});
            let text = img
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !drinfeld::Ring::is_zero(*c))
                .map(|(i, c)| format!("({})*tau^{i}", c.pretty(&["T"])))
                .collect::<Vec<_>>()
                .join(" + ");
            Ok(Output::Both(v, text))
        }
        Cmd::Gamma {
            order,
            a,
            bound,
            certified,
        } => {
            let spec = OrderSpec::from_json(&read_json(order)?)?;
            let a = parse_a(&Value::String(a.clone()), spec.ctx())?;
            let res = gamma_count(&spec, &a, *bound, *certified)?;
            let text = format!("{} ({})", res.count, if res.exact { "exact" } else { "lower bound" });
            Ok(Output::Both(res.to_json(spec.ctx()), text))
        }
        Cmd::Fitnorm { order, ideal } => {
            let spec = OrderSpec::from_json(&read_json(order)?)?;
            let iv = read_json(ideal)?;
            let read = |key: &str| -> Res<Option<Vec<Vec<Poly>>>> {
                match iv.get(key) {
                    None => Ok(None),
                    Some(Value::Array(xs)) => Ok(Some(
                        xs.iter()
                            .map(|x| parse_vector(x, spec.ctx()))
                            .collect::<Result<_, _>>()?,
                    )),
                    Some(_) => Err(Failure::Math(Error::Parse(format!("{key} must be an array")))),
                }
            };
            let id = match (read("o_generators")?, read("a_generators")?) {
                (Some(g), None) => spec.ideal_from_elements(&g),
                (None, Some(cols)) => IdealPresentation { columns: cols },
                _ => {
                    return Err(Failure::Math(Error::Parse(
                        "ideal needs exactly one of o_generators, a_generators".into(),
                    )))
                }
            };
            if id.columns.iter().any(|c| c.len() != spec.rank()) {
                return Err(Failure::Math(Error::Parse(format!(
                    "generators need {} coordinates",
                    spec.rank()
                ))));
            }
            let d = id.invariant_factors()?;
            let n = id.fitting_norm()?;
            let v = json!({
                "norm": poly_json(&n, spec.ctx()),
                "invariant_factors": d.iter().map(|x| x.pretty(&["T"])).collect::<Vec<_>>(),
            });
            Ok(Output::Both(v, n.pretty(&["T"])))
        }
        Cmd::Volcano { cmd } => volcano(cmd, format),
        Cmd::Points { field: fa, rexp, f } => {
            let ctx = field(fa)?;
            let n = count_affine_points(&poly_in_t(f, &ctx)?, *rexp)?;
            Ok(Output::Text(n.to_string()))
        }
    }
}

fn volcano(cmd: &VolcanoCmd, _format: Format) -> Res<Output> {
    match cmd {
        VolcanoCmd::Gen {
            group,
            images,
            q,
            r,
            degl,
            depth,
            branching,
        } => {
            let inv: Vec<u64> = parse_list(group, "group")?;
            let imgs = images
                .split(';')
                .map(|s| parse_list::<u64>(s, "image"))
                .collect::<Res<Vec<_>>>()?;
            let crater = CraterSpec::new(inv, imgs)?;
            let b = match branching {
                Some(s) => parse_list(s, "branching")?,
                None => vec![branching_factor(*q, *r, *degl)?; *depth],
            };
            Ok(Output::Graph(build_volcano_with(&crater, &b, *depth)?))
        }
        VolcanoCmd::Validate { graph, r, g1, b } => {
            let g = VolcanoGraph::from_json(&read_json(graph)?)?;
            let rep = validate_volcano(&g, VolcanoParams { r: *r, g1: *g1, b: *b })?;
            let v = json!({"pass": rep.pass(), "violations": rep.violations, "notes": rep.notes});
            let text = if rep.pass() {
                "pass".to_string()
            } else {
                format!("fail\n{}", rep.violations.join("\n"))
            };
            Ok(Output::Both(v, text))
        }
        VolcanoCmd::Preset { name, depth } => Ok(Output::Graph(Preset::parse(name)?.build(*depth)?)),
    }
}
