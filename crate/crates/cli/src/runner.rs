//! Executes the commands of a resolved document and builds the JSON report.

use multimod_core::constructions::{hom_multimodule, tensor_over};
use multimod_core::diffop::{commutator_check_selected, diff1_selected, hom_inclusion};
use multimod_core::duality::{dual, reflexivity, semi_adjunction, DualSelection};
use multimod_core::inner_product::{classify, InnerProduct};
use multimod_core::morphism::equivariant_space;
use multimod_core::multimodule::Multimodule;
use multimod_core::oracle::{agreement, is_dual_map, is_equivariant, Agreement, Method, SAMPLES};
use multimod_core::trace::{contraction, tensor_contraction_iso, TraceRelation};
use multimod_core::{iso_test, FpModule, IsoResult, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::ast::{Command, CommandDecl, Name, Selection};
use crate::diagnostic::Diagnostic;
use crate::resolve::{Entity, Env};

/// Report format version.
pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Seed for the sampled agreement checks.
    pub seed: u64,
    /// Largest number of candidate maps enumerated exhaustively.
    pub enum_threshold: u128,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            enum_threshold: multimod_core::oracle::ENUM_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// The result of one command.
#[derive(Debug, Clone)]
pub struct CommandResult {
    pub line: u32,
    pub text: String,
    pub verdict: Verdict,
    pub json: Value,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Vec<CommandResult>,
    pub report: Value,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.verdict == Verdict::Pass)
    }
}

/// Runs every command in document order.
pub fn run(env: &Env, warnings: &[Diagnostic], opts: &Options) -> Outcome {
    let results: Vec<CommandResult> = env
        .commands
        .iter()
        .enumerate()
        .map(|(i, c)| run_command(env, c, i as u64, opts))
        .collect();
    let passed = results.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let report = json!({
        "schema": SCHEMA,
        "modulus": env.modulus.map(|m| m.value()),
        "seed": opts.seed,
        "enum_threshold": u64::try_from(opts.enum_threshold).unwrap_or(u64::MAX),
        "warnings": warnings.iter().map(Diagnostic::to_json).collect::<Vec<_>>(),
        "results": results.iter().map(|r| r.json.clone()).collect::<Vec<_>>(),
        "summary": {
            "commands": results.len(),
            "passed": passed,
            "failed": results.len() - passed,
        },
        "status": if passed == results.len() { "pass" } else { "fail" },
    });
    Outcome { results, report }
}

/// The report emitted when a document cannot be parsed or resolved.
pub fn diagnostics_report(diags: &[Diagnostic]) -> Value {
    json!({
        "schema": SCHEMA,
        "status": "error",
        "diagnostics": diags.iter().map(Diagnostic::to_json).collect::<Vec<_>>(),
    })
}

fn run_command(env: &Env, c: &CommandDecl, index: u64, opts: &Options) -> CommandResult {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index);
    let mut body = Map::new();
    let verdict = match execute(env, &c.command, opts, &mut rng, &mut body) {
        Ok(v) => v,
        Err(e) => {
            body.insert("error".into(), Value::String(e.to_string()));
            Verdict::Error
        }
    };
    let text = c.command.to_string();
    body.insert("command".into(), json!(c.command.keyword()));
    body.insert("input".into(), json!(text));
    body.insert("line".into(), json!(c.span.line));
    body.insert("verdict".into(), json!(verdict.as_str()));
    CommandResult {
        line: c.span.line,
        text,
        verdict,
        json: Value::Object(body),
    }
}

fn big(x: Option<u128>) -> Value {
    match x.and_then(|v| u64::try_from(v).ok()) {
        Some(v) => json!(v),
        None => Value::Null,
    }
}

fn module_json(m: &FpModule) -> Value {
    json!({
        "generators": m.ngens(),
        "invariant_factors": m.invariant_factors(),
        "order": big(m.order()),
    })
}

fn actions_json(m: &Multimodule) -> Value {
    Value::Array(
        m.actions()
            .iter()
            .map(|a| {
                json!({
                    "label": a.label,
                    "side": a.side.as_str(),
                    "algebra": a.algebra.name(),
                    "rank": a.algebra.rank(),
                })
            })
            .collect(),
    )
}

fn multimodule_json(m: &Multimodule) -> Value {
    json!({
        "carrier": module_json(m.carrier()),
        "actions": actions_json(m),
    })
}

fn violations_json(r: &Report) -> Value {
    Value::Array(
        r.violations
            .iter()
            .map(|v| {
                let mut o = json!({ "law": v.law, "detail": v.detail });
                if let Some(w) = &v.witness {
                    o["witness"] = json!({
                        "generators": w.generators,
                        "lhs": w.lhs,
                        "rhs": w.rhs,
                    });
                }
                o
            })
            .collect(),
    )
}

fn agreement_json(a: &Agreement) -> Value {
    let mut o = json!({
        "method": match a.method {
            Method::Exhaustive => "exhaustive",
            Method::Sampled => "sampled",
        },
        "examined": a.examined,
        "accepted": a.accepted,
        "agrees": a.agrees(),
    });
    if let Some(x) = &a.mismatch {
        o["mismatch"] = json!(x.to_rows());
    }
    o
}

fn put(body: &mut Map<String, Value>, key: &str, v: Value) {
    body.insert(key.into(), v);
}

fn put_report(body: &mut Map<String, Value>, r: &Report) {
    put(body, "holds", json!(r.holds()));
    put(body, "violations", violations_json(r));
}

fn selection(s: &Selection) -> DualSelection {
    let l: Vec<&str> = s.left.iter().map(Name::as_str).collect();
    let r: Vec<&str> = s.right.iter().map(Name::as_str).collect();
    DualSelection::new(&l, &r)
}

fn pairs(p: &[(Name, Name)]) -> Vec<(String, String)> {
    p.iter().map(|(a, b)| (a.text.clone(), b.text.clone())).collect()
}

fn module<'a>(env: &'a Env, n: &Name) -> &'a Multimodule {
    env.multimodule(n.as_str()).expect("resolved")
}

fn execute(
    env: &Env,
    cmd: &Command,
    opts: &Options,
    rng: &mut ChaCha8Rng,
    body: &mut Map<String, Value>,
) -> multimod_core::Result<Verdict> {
    let limit = opts.enum_threshold;
    match cmd {
        Command::Check(n) => {
            let entity = &env.entities[n.as_str()];
            put(body, "kind", json!(entity.kind()));
            let report = match entity {
                Entity::Algebra(a) => {
                    put(body, "rank", json!(a.rank()));
                    put(body, "commutative", json!(a.is_commutative()));
                    a.check()
                }
                Entity::Conjugation(c) => {
                    put(body, "variance", json!(c.variance().as_str()));
                    c.check()
                }
                Entity::Involution { module: m, involution } => involution.check(env.multimodule(m).expect("resolved")),
                Entity::Multimodule(m) => {
                    put(body, "multimodule", multimodule_json(m));
                    m.check()
                }
                Entity::Morphism(f) => {
                    let r = f.check();
                    if let Ok(map) = f.module_map() {
                        put(body, "injective", json!(map.is_injective()));
                        put(body, "surjective", json!(map.is_surjective()));
                    }
                    r
                }
                Entity::InnerProduct(p) => {
                    put(body, "axioms", json!(axioms(p)));
                    p.check()
                }
            };
            put_report(body, &report);
            Ok(Verdict::of(report.holds()))
        }
        Command::Dual(n, s) => {
            let m = module(env, n);
            let sel = selection(s);
            let d = dual(m, &sel)?;
            put(body, "dual", multimodule_json(&d.result));
            let rep = d.result.check();
            put_report(body, &rep);
            let ag = agreement(&d.space, |x| is_dual_map(m, &sel, x), limit, SAMPLES, rng)?;
            put(body, "oracle", agreement_json(&ag));
            Ok(Verdict::of(rep.holds() && ag.agrees()))
        }
        Command::Hom(a, b) => {
            let (m, k) = (module(env, a), module(env, b));
            let space = equivariant_space(m, k)?;
            put(body, "equivariant", module_json(space.module()));
            let all = hom_multimodule(m, k)?;
            put(body, "linear", multimodule_json(&all.result));
            let ag = agreement(&space, |x| is_equivariant(m, k, x), limit, SAMPLES, rng)?;
            put(body, "oracle", agreement_json(&ag));
            Ok(Verdict::of(ag.agrees()))
        }
        Command::Tensor(a, b, p) => {
            let (m, k) = (module(env, a), module(env, b));
            let gamma = pairs(p);
            let tp = tensor_over(m, k, &gamma)?;
            put(body, "tensor", multimodule_json(&tp.result));
            let rep = tp.result.check();
            put_report(body, &rep);
            let coherent = match tensor_contraction_iso(m, k, &gamma) {
                Ok(ci) => ci.iso.check().holds(),
                Err(_) => false,
            };
            put(body, "contraction_iso", json!(coherent));
            Ok(Verdict::of(rep.holds() && coherent))
        }
        Command::Trace(n, p) => {
            let m = module(env, n);
            let rel = TraceRelation { pairs: pairs(p) };
            let c = contraction(m, &rel)?;
            put(body, "contraction", multimodule_json(&c.result));
            let rep = c.result.check();
            put_report(body, &rep);
            Ok(Verdict::of(rep.holds()))
        }
        Command::Diff1(a, b, sel) => {
            let (m, k) = (module(env, a), module(env, b));
            let sel: Vec<String> = match sel {
                Some(s) => s.iter().map(|x| x.text.clone()).collect(),
                None => m.all_labels(),
            };
            let d = diff1_selected(m, k, &sel)?;
            put(body, "selection", json!(sel));
            put(body, "diff1", module_json(d.space.module()));
            let (hom, inc) = hom_inclusion(&d)?;
            put(body, "hom", module_json(hom.module()));
            put(body, "hom_is_proper", json!(!inc.is_surjective()));
            let pred = |x: &multimod_core::Mat| {
                commutator_check_selected(x, m, k, &sel)
                    .map(|r| r.holds())
                    .unwrap_or(false)
            };
            let ag = agreement(&d.space, pred, limit, SAMPLES, rng)?;
            put(body, "oracle", agreement_json(&ag));
            Ok(Verdict::of(ag.agrees()))
        }
        Command::Semiadjunction(n, s) => {
            let m = module(env, n);
            let sa = semi_adjunction(m, &selection(s))?;
            let rep = sa.identity_report();
            put(body, "semiadjunction", json!(if rep.holds() { "holds" } else { "fails" }));
            put(body, "violations", violations_json(&rep));
            put(body, "pairing", json!(sa.evaluation_pairing()?.classify().name()));
            Ok(Verdict::of(rep.holds()))
        }
        Command::Iso(a, b) => {
            let (m, k) = (module(env, a), module(env, b));
            put(body, "left", module_json(m.carrier()));
            put(body, "right", module_json(k.carrier()));
            let iso = matches!(iso_test(m.carrier(), k.carrier())?, IsoResult::Isomorphic(_));
            put(body, "isomorphic", json!(iso));
            Ok(Verdict::Pass)
        }
        Command::Reflexive(n, s) => {
            let m = module(env, n);
            let r = reflexivity(m, &selection(s))?;
            put(body, "injective", json!(r.injective));
            put(body, "surjective", json!(r.surjective));
            put(body, "reflexive", json!(r.is_reflexive()));
            Ok(Verdict::Pass)
        }
        Command::Classify(n) => {
            let Entity::InnerProduct(p) = &env.entities[n.as_str()] else {
                unreachable!("resolved as an inner product")
            };
            let rep = p.check();
            put_report(body, &rep);
            if !rep.holds() {
                return Ok(Verdict::Fail);
            }
            let c = classify(p)?;
            put(body, "nondegenerate", json!(c.nondegenerate));
            put(body, "full", json!(c.full));
            put(body, "saturated", json!(c.saturated));
            put(body, "forward_kernel", json!(c.forward_kernel));
            put(body, "backward_kernel", json!(c.backward_kernel));
            put(body, "riesz_isomorphism", json!(c.inverse.is_some()));
            Ok(Verdict::Pass)
        }
    }
}

fn axioms(p: &InnerProduct) -> Vec<String> {
    p.axioms()
        .iter()
        .map(|a| format!("{}@{}", a.kind.as_str(), a.label))
        .collect()
}
