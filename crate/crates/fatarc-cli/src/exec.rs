//! Script execution: declarations build an environment, commands produce
//! reports. Text and JSON emitters live here; both are deterministic for a
//! fixed script and option set.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use fatarc_core::arcs::{arc_dim, arc_scheme, image_closure, ArcScheme, Motif};
use fatarc_core::classes::{count_fat, count_fat_motif, count_motif, count_scheme};
use fatarc_core::fatpoints::{FatPoint, Germ};
use fatarc_core::frobchar::frobenius_transform;
use fatarc_core::ideals::Ideal;
use fatarc_core::motint::{char_function, integrate, Realization};
use fatarc_core::polycore::{valid_user_variable, Field, MonomialOrder, Polynomial, Ring};
use fatarc_core::series::{
    auto_igusa, hilbert_kunz_series, hilbert_series, igusa_series, milnor_series, SeriesReport,
};
use fatarc_core::Budget;

use crate::script::{
    Cmd, FieldDecl, GermRef, MotifAtom, MotifExpr, PolyText, RealizationRef, Script, ScriptError,
    Span, Stmt, StmtKind,
};

/// Execution options, mirroring the command-line flags.
#[derive(Clone, Debug)]
pub struct Options {
    pub json: bool,
    pub char_override: Option<u64>,
    pub order: MonomialOrder,
    pub budget: Budget,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            json: false,
            char_override: None,
            order: MonomialOrder::GrevLex,
            budget: Budget::default(),
        }
    }
}

/// Result of running a script: everything written to standard output plus
/// an optional error (already formatted with its source location).
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub stdout: String,
    pub error: Option<String>,
}

impl RunOutput {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Clone)]
enum Entity {
    Ring(Ring),
    Ideal(Ideal),
    FatPoint(FatPoint),
    Germ(Germ),
    Motif(Motif),
}

struct Env {
    field: Field,
    names: HashMap<String, Entity>,
}

type EResult<T> = std::result::Result<T, ScriptError>;

fn fail<T>(span: Span, msg: impl Into<String>) -> EResult<T> {
    Err(ScriptError { span, msg: msg.into() })
}

fn core_err(span: Span, e: fatarc_core::Error) -> ScriptError {
    ScriptError { span, msg: e.to_string() }
}

impl Env {
    fn ring(&self, name: &str) -> &Ring {
        match self.names.get(name) {
            Some(Entity::Ring(r)) => r,
            _ => unreachable!("parser guarantees `{}` is a ring", name),
        }
    }

    fn ideal(&self, name: &str) -> &Ideal {
        match self.names.get(name) {
            Some(Entity::Ideal(i)) => i,
            _ => unreachable!("parser guarantees `{}` is an ideal or scheme", name),
        }
    }

    fn fatpoint(&self, name: &str) -> &FatPoint {
        match self.names.get(name) {
            Some(Entity::FatPoint(f)) => f,
            _ => unreachable!("parser guarantees `{}` is a fat point", name),
        }
    }

    fn germ(&self, name: &str) -> &Germ {
        match self.names.get(name) {
            Some(Entity::Germ(g)) => g,
            _ => unreachable!("parser guarantees `{}` is a germ", name),
        }
    }

    fn motif(&self, name: &str) -> &Motif {
        match self.names.get(name) {
            Some(Entity::Motif(m)) => m,
            _ => unreachable!("parser guarantees `{}` is a motif", name),
        }
    }
}

/// Scan the identifiers of a polynomial expression in order of first
/// appearance. The polynomial grammar has no function names, so every
/// identifier is a variable.
fn scan_variables(texts: &[PolyText]) -> Vec<String> {
    let mut seen = Vec::new();
    for t in texts {
        let mut chars = t.text.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_ascii_alphabetic() {
                let mut name = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' || c2 == '~' {
                        name.push(c2);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if !seen.contains(&name) {
                    seen.push(name);
                }
            } else {
                chars.next();
            }
        }
    }
    seen
}

/// Resolve the ring for a generator list: an explicit `in R` clause wins;
/// otherwise a fresh ring is built from the variables in order of first
/// appearance.
fn resolve_ring(
    env: &Env,
    ring: &Option<String>,
    gens: &[PolyText],
    span: Span,
) -> EResult<Ring> {
    if let Some(name) = ring {
        return Ok(env.ring(name).clone());
    }
    let vars = scan_variables(gens);
    if vars.is_empty() {
        return fail(span, "no variables to infer a ring from; add an explicit `in <ring>`");
    }
    for v in &vars {
        if !valid_user_variable(v) {
            return fail(span, format!("variable `{}` uses the reserved arc-variable syntax", v));
        }
    }
    Ring::new(env.field, vars).map_err(|e| core_err(span, e))
}

fn parse_gens(ring: &Ring, gens: &[PolyText]) -> EResult<Vec<Polynomial>> {
    gens.iter()
        .map(|g| {
            Polynomial::parse(ring, &g.text)
                .map_err(|e| ScriptError { span: g.span, msg: e.to_string() })
        })
        .collect()
}

fn build_ideal(env: &Env, gens: &[PolyText], ring: &Option<String>, span: Span) -> EResult<Ideal> {
    let ring = resolve_ring(env, ring, gens, span)?;
    let gens = parse_gens(&ring, gens)?;
    Ideal::new(ring, gens).map_err(|e| core_err(span, e))
}

fn build_motif(env: &Env, expr: &MotifExpr, span: Span) -> EResult<Motif> {
    let mut out: Option<Motif> = None;
    for cell in &expr.cells {
        let mut acc: Option<Motif> = None;
        for lit in cell {
            let atom = match &lit.atom {
                MotifAtom::Closed { gens, ring } => {
                    Motif::closed(build_ideal(env, gens, ring, lit.span)?)
                }
                MotifAtom::Cone { gens, ring } => {
                    Motif::cone(build_ideal(env, gens, ring, lit.span)?)
                }
                MotifAtom::All { ring } => Motif::whole(env.ring(ring).clone()),
                MotifAtom::Name(name) => env.motif(name).clone(),
            };
            let atom = if lit.negated {
                atom.not().map_err(|e| core_err(lit.span, e))?
            } else {
                atom
            };
            acc = Some(match acc {
                None => atom,
                Some(prev) => prev.intersect(&atom).map_err(|e| core_err(lit.span, e))?,
            });
        }
        let cell_motif = acc.expect("parser guarantees nonempty cells");
        out = Some(match out {
            None => cell_motif,
            Some(prev) => prev.union(&cell_motif).map_err(|e| core_err(span, e))?,
        });
    }
    Ok(out.expect("parser guarantees nonempty motif expressions"))
}

fn resolve_germ(env: &Env, germ: &GermRef, span: Span) -> EResult<Germ> {
    match germ {
        GermRef::Name(name) => Ok(env.germ(name).clone()),
        GermRef::AtOrigin(scheme) => {
            Germ::at_origin(env.ideal(scheme).clone()).map_err(|e| core_err(span, e))
        }
    }
}

/// `<g1, g2>` with zero generators suppressed; the zero ideal prints `<0>`.
fn fmt_ideal(ideal: &Ideal) -> String {
    let gens: Vec<String> =
        ideal.gens().iter().filter(|g| !g.is_zero()).map(|g| g.display()).collect();
    if gens.is_empty() {
        "<0>".to_string()
    } else {
        format!("<{}>", gens.join(", "))
    }
}

fn ideal_gen_strings(ideal: &Ideal) -> Vec<String> {
    ideal.gens().iter().filter(|g| !g.is_zero()).map(|g| g.display()).collect()
}

fn arc_variable_names(arc: &ArcScheme) -> Vec<String> {
    arc.ring().var_names().to_vec()
}

fn order_name(order: &MonomialOrder) -> &'static str {
    match order {
        MonomialOrder::Lex => "lex",
        _ => "grevlex",
    }
}

/// Render a fitted polynomial tail `c0 + c1*n + c2*n^2 + …`.
fn fmt_tail(tail: &[BigRational]) -> String {
    let mut out = String::new();
    for (p, c) in tail.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let term = match (p, mag.is_one()) {
            (0, _) => format!("{}", mag),
            (1, true) => "n".to_string(),
            (1, false) => format!("{}*n", mag),
            (_, true) => format!("n^{}", p),
            (_, false) => format!("{}*n^{}", mag, p),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn series_text(report: &SeriesReport) -> String {
    let mut out = format!("{} series, truncation {}\n", report.kind, report.truncation);
    let lengths_only = matches!(report.kind, "hilbert" | "hilbert-kunz");
    for c in &report.coefficients {
        if lengths_only {
            out.push_str(&format!("n={}: length={}\n", c.n, c.jet_length));
        } else {
            out.push_str(&format!(
                "n={}: length={}, dim={}, defect={}",
                c.n, c.jet_length, c.dim, c.defect
            ));
            if let Some(l) = &c.l_coeff {
                out.push_str(&format!(", class={}", l.display()));
            }
            out.push('\n');
        }
    }
    if let Some(cf) = &report.closed_form {
        out.push_str(&format!("closed form: {}\n", cf.display()));
    }
    if let Some(tail) = &report.tail_fit {
        out.push_str(&format!("tail fit: {}\n", fmt_tail(tail)));
    }
    out
}

fn series_json(report: &SeriesReport, span: Span) -> EResult<Value> {
    let mut v = report.to_json().map_err(|e| core_err(span, e))?;
    if let Value::Object(map) = &mut v {
        map.insert("command".to_string(), Value::String("series".to_string()));
    }
    Ok(v)
}

fn count_json(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}

/// Execute a parsed script. Declarations never print; each command appends
/// one report. On error, reports produced so far are kept and the error is
/// formatted with the failing statement's source position (and the command
/// index for runtime failures).
pub fn run_script(script: &Script, opts: &Options) -> RunOutput {
    let field = match opts.char_override {
        Some(p) => match Field::prime(p) {
            Ok(f) => f,
            Err(e) => {
                return RunOutput {
                    stdout: String::new(),
                    error: Some(format!("--char {}: {}", p, e)),
                }
            }
        },
        None => match script.field {
            FieldDecl::Rationals => Field::rationals(),
            FieldDecl::Prime(p) => {
                Field::prime(p).expect("parser validated the characteristic")
            }
        },
    };
    let mut env = Env { field, names: HashMap::new() };
    let mut texts: Vec<String> = Vec::new();
    let mut reports: Vec<Value> = Vec::new();
    let mut error = None;
    let mut command_index = 0usize;

    for stmt in &script.stmts {
        match exec_stmt(stmt, &mut env, opts, &mut command_index) {
            Ok(None) => {}
            Ok(Some((text, value))) => {
                texts.push(text);
                reports.push(value);
            }
            Err(e) => {
                let prefix = if matches!(stmt.kind, StmtKind::Command(_)) {
                    format!("command {} ({})", command_index, e.span)
                } else {
                    format!("{}", e.span)
                };
                error = Some(format!("{}: {}", prefix, e.msg));
                break;
            }
        }
    }

    let stdout = if opts.json {
        let mut s = serde_json::to_string_pretty(&Value::Array(reports))
            .expect("JSON reports serialize");
        s.push('\n');
        s
    } else {
        texts.concat()
    };
    RunOutput { stdout, error }
}

fn exec_stmt(
    stmt: &Stmt,
    env: &mut Env,
    opts: &Options,
    command_index: &mut usize,
) -> EResult<Option<(String, Value)>> {
    let span = stmt.span;
    match &stmt.kind {
        StmtKind::Field(_) => Ok(None),
        StmtKind::RingDecl { name, vars } => {
            let ring =
                Ring::new(env.field, vars.clone()).map_err(|e| core_err(span, e))?;
            env.names.insert(name.clone(), Entity::Ring(ring));
            Ok(None)
        }
        StmtKind::IdealDecl { name, gens, ring, .. } => {
            let ideal = build_ideal(env, gens, ring, span)?;
            env.names.insert(name.clone(), Entity::Ideal(ideal));
            Ok(None)
        }
        StmtKind::FatPointDecl { name, gens, ring } => {
            let ideal = build_ideal(env, gens, ring, span)?;
            let fp = FatPoint::new(ideal, &opts.budget).map_err(|e| core_err(span, e))?;
            env.names.insert(name.clone(), Entity::FatPoint(fp));
            Ok(None)
        }
        StmtKind::GermDecl { name, scheme } => {
            let germ =
                Germ::at_origin(env.ideal(scheme).clone()).map_err(|e| core_err(span, e))?;
            env.names.insert(name.clone(), Entity::Germ(germ));
            Ok(None)
        }
        StmtKind::MotifDecl { name, expr } => {
            let motif = build_motif(env, expr, span)?;
            env.names.insert(name.clone(), Entity::Motif(motif));
            Ok(None)
        }
        StmtKind::Command(cmd) => {
            *command_index += 1;
            exec_command(cmd, env, opts, span).map(Some)
        }
    }
}

fn exec_command(
    cmd: &Cmd,
    env: &Env,
    opts: &Options,
    span: Span,
) -> EResult<(String, Value)> {
    let budget = &opts.budget;
    match cmd {
        Cmd::Arc { scheme, fatpoint } => {
            let arc = arc_scheme(env.ideal(scheme), env.fatpoint(fatpoint), budget)
                .map_err(|e| core_err(span, e))?;
            let text = format!("arc = {}\n", fmt_ideal(arc.ideal()));
            let value = json!({
                "command": "arc",
                "generators": ideal_gen_strings(arc.ideal()),
                "variables": arc_variable_names(&arc),
            });
            Ok((text, value))
        }
        Cmd::Dim { scheme, fatpoint } => {
            let (arc, rep) = arc_dim(env.ideal(scheme), env.fatpoint(fatpoint), budget)
                .map_err(|e| core_err(span, e))?;
            let text = format!("dim = {}, defect = {}\n", rep.dim, rep.defect);
            let vanishing: Vec<String> = rep
                .vanishing_vars
                .iter()
                .map(|&i| arc.ring().var_names()[i as usize].clone())
                .collect();
            let value = json!({
                "command": "dim",
                "dim": rep.dim,
                "defect": rep.defect,
                "coordinate_affine": rep.coordinate_affine,
                "vanishing": vanishing,
            });
            Ok((text, value))
        }
        Cmd::Length { name } => {
            let l = env.fatpoint(name).length();
            Ok((format!("length = {}\n", l), json!({"command": "length", "length": l})))
        }
        Cmd::Basis { name } => match env.names.get(name) {
            Some(Entity::FatPoint(fp)) => {
                let basis: Vec<String> = fp
                    .staircase()
                    .iter()
                    .map(|m| fp.ring().monomial(m.clone()).display())
                    .collect();
                let text = format!("basis = [{}]\n", basis.join(", "));
                Ok((text, json!({"command": "basis", "basis": basis})))
            }
            Some(Entity::Ideal(ideal)) => {
                let gb = ideal
                    .groebner_basis(&opts.order, budget)
                    .map_err(|e| core_err(span, e))?;
                let elems: Vec<String> = gb.elems().iter().map(|g| g.display()).collect();
                let text = if elems.is_empty() {
                    "basis = <0>\n".to_string()
                } else {
                    format!("basis = <{}>\n", elems.join(", "))
                };
                let value = json!({
                    "command": "basis",
                    "basis": elems,
                    "order": order_name(&opts.order),
                });
                Ok((text, value))
            }
            _ => unreachable!("parser guarantees basis targets"),
        },
        Cmd::Igusa { scheme, germ, upto } => {
            let germ = resolve_germ(env, germ, span)?;
            let report = igusa_series(env.ideal(scheme), &germ, *upto, budget)
                .map_err(|e| core_err(span, e))?;
            Ok((series_text(&report), series_json(&report, span)?))
        }
        Cmd::AutoIgusa { germ, upto } => {
            let germ = resolve_germ(env, germ, span)?;
            let report =
                auto_igusa(&germ, *upto, budget).map_err(|e| core_err(span, e))?;
            Ok((series_text(&report), series_json(&report, span)?))
        }
        Cmd::Hilbert { germ, upto } => {
            let germ = resolve_germ(env, germ, span)?;
            let report =
                hilbert_series(&germ, *upto, budget).map_err(|e| core_err(span, e))?;
            Ok((series_text(&report), series_json(&report, span)?))
        }
        Cmd::HilbertKunz { sub, ambient, upto } => {
            let report =
                hilbert_kunz_series(env.ideal(sub), env.ideal(ambient), *upto, budget)
                    .map_err(|e| core_err(span, e))?;
            Ok((series_text(&report), series_json(&report, span)?))
        }
        Cmd::Milnor { f, ring, germ, upto } => {
            let fring = resolve_ring(env, ring, std::slice::from_ref(f), span)?;
            let fpoly = Polynomial::parse(&fring, &f.text)
                .map_err(|e| ScriptError { span: f.span, msg: e.to_string() })?;
            let germ = resolve_germ(env, germ, span)?;
            let report =
                milnor_series(&fpoly, &germ, *upto, budget).map_err(|e| core_err(span, e))?;
            Ok((series_text(&report), series_json(&report, span)?))
        }
        Cmd::Integrate { motif, fatpoint, realization } => {
            let s = char_function(env.motif(motif), budget).map_err(|e| core_err(span, e))?;
            let realization = match realization {
                RealizationRef::At(q) => Realization::Count(*q),
                RealizationRef::Symbolic => Realization::Symbolic,
            };
            let report = integrate(&s, env.fatpoint(fatpoint), &realization, budget)
                .map_err(|e| core_err(span, e))?;
            let text = format!("integral = {}\n", report.integral.display());
            let mut value = report.to_json().map_err(|e| core_err(span, e))?;
            if let Value::Object(map) = &mut value {
                map.insert("command".to_string(), Value::String("integrate".to_string()));
            }
            Ok((text, value))
        }
        Cmd::Count { name, q, via } => {
            let n = match (env.names.get(name), via) {
                (Some(Entity::Ideal(ideal)), None) => {
                    count_scheme(ideal, *q, budget).map_err(|e| core_err(span, e))?
                }
                (Some(Entity::Ideal(ideal)), Some(v)) => {
                    count_fat(ideal, env.fatpoint(v), *q, budget)
                        .map_err(|e| core_err(span, e))?
                }
                (Some(Entity::Motif(m)), None) => {
                    count_motif(m, *q, budget).map_err(|e| core_err(span, e))?
                }
                (Some(Entity::Motif(m)), Some(v)) => {
                    count_fat_motif(m, env.fatpoint(v), *q, budget)
                        .map_err(|e| core_err(span, e))?
                }
                _ => unreachable!("parser guarantees count targets"),
            };
            Ok((format!("count = {}\n", n), {
                let mut v = json!({"command": "count", "q": q});
                if let Value::Object(map) = &mut v {
                    map.insert("count".to_string(), count_json(n));
                }
                v
            }))
        }
        Cmd::Closure { source, images, target } => {
            let source_ideal = env.ideal(source);
            let target_ring = env.ring(target);
            if images.len() != target_ring.num_vars() as usize {
                return fail(
                    span,
                    format!(
                        "expected {} images for ring `{}`, found {}",
                        target_ring.num_vars(),
                        target,
                        images.len()
                    ),
                );
            }
            let images = parse_gens(source_ideal.ring(), images)?;
            let closure = image_closure(source_ideal, &images, target_ring, budget)
                .map_err(|e| core_err(span, e))?;
            let text = format!("closure = {}\n", fmt_ideal(&closure));
            let value = json!({
                "command": "closure",
                "generators": ideal_gen_strings(&closure),
            });
            Ok((text, value))
        }
        Cmd::Frobenius { sub, ambient, order } => {
            let transform =
                frobenius_transform(env.ideal(sub), env.ideal(ambient), *order, budget)
                    .map_err(|e| core_err(span, e))?;
            let text = format!("frobenius = {}\n", fmt_ideal(&transform));
            let value = json!({
                "command": "frobenius",
                "generators": ideal_gen_strings(&transform),
                "order": order,
            });
            Ok((text, value))
        }
    }
}
