//! The `verify` suites.

use std::collections::BTreeSet;

use clap::ValueEnum;
use polykit::algebra::{self, PointAction};
use polykit::ring::{IntegerRing, ModRing, PolyRing, Ring, RingSpec};
use polykit::steinberg::{self, Centrality, IndexModel, ModelClass};
use polykit::{columns, doubling, scalar, Int, Polytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Outcome;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Commutator formula for every ordered pair of columns.
    Comrel,
    /// Steinberg relations realized by elementary automorphisms.
    Pi,
    /// Additive embedding for each shared base facet.
    Afemb,
    /// Conjugation of elementary automorphisms by a unit character.
    TrivcenStar,
    /// Reordering isomorphism for each ordered pair of facets.
    Welldef,
    /// Lifted columns against computed columns for each facet.
    Colbal,
    /// Finite matrix model of a class b, c or d polygon.
    MatrixModel,
    /// Sign switch on a doubled segment.
    Nfiltun,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    B,
    C,
    D,
}

pub struct ModelArgs {
    pub kind: ModelKind,
    pub j: usize,
    pub t: usize,
}

/// Run `$body` with `$r` bound to the ring described by `$spec`.
macro_rules! with_ring {
    ($spec:expr, $r:ident => $body:expr) => {
        match $spec {
            RingSpec::Integers => {
                let $r = IntegerRing;
                $body
            }
            RingSpec::Modular(m) => {
                let $r = ModRing::new(m.clone())?;
                $body
            }
            RingSpec::Polynomial(vars) => {
                let $r = PolyRing::new(vars)?;
                $body
            }
        }
    };
}

/// Scalar pairs for the two-parameter relations: the first two
/// indeterminates of a polynomial ring, otherwise seeded samples.
type Pairs<R> = Vec<(<R as Ring>::Elem, <R as Ring>::Elem)>;

fn scalar_pairs<R: Ring>(ring: &R, spec: &RingSpec, seed: u64) -> Result<Pairs<R>, CliError> {
    if let RingSpec::Polynomial(vars) = spec {
        if vars.len() < 2 {
            return Err(CliError::Usage("a polynomial ring needs two indeterminates, e.g. poly:lambda,mu".into()));
        }
        return Ok(vec![(ring.var(&vars[0])?, ring.var(&vars[1])?)]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..4)
        .map(|_| (ring.from_i64(rng.gen_range(-6..=6)), ring.from_i64(rng.gen_range(-6..=6))))
        .collect())
}

fn comrel<R: Ring>(p: &Polytope, ring: &R, spec: &RingSpec, seed: u64, out: &mut Outcome) -> Result<Value, CliError> {
    let t = columns::column_vectors(p);
    let pairs = scalar_pairs(ring, spec, seed)?;
    let mut rows = Vec::new();
    for u in 0..t.len() {
        for v in 0..t.len() {
            if u == v || scalar::is_zero_vec(&scalar::add(&t.get(u).v, &t.get(v).v)) {
                continue;
            }
            for (l, m) in &pairs {
                let rep = algebra::verify_comrel(p, &t, u, v, ring, l, m)?;
                if !rep.pass {
                    out.failed = true;
                }
                out.line(format!(
                    "{} u={} v={} lambda={} mu={}: {:?} -> {}",
                    if rep.pass { "pass" } else { "FAIL" },
                    rep.u,
                    rep.v,
                    ring.render(l),
                    ring.render(m),
                    rep.case,
                    rep.rhs
                ));
                rows.push(json!({"lambda": ring.render(l), "mu": ring.render(m), "report": rep}));
            }
        }
    }
    Ok(json!({"ring": ring.describe(), "checks": rows}))
}

fn pi<R: Ring>(p: &Polytope, ring: &R, spec: &RingSpec, seed: u64, out: &mut Outcome) -> Result<Value, CliError> {
    let t = columns::column_vectors(p);
    let pres = steinberg::presentation(&t)?;
    let mut rows = Vec::new();
    for (l, m) in scalar_pairs(ring, spec, seed)? {
        for c in steinberg::pi_check(p, &t, &pres, ring, &l, &m)? {
            if !c.pass {
                out.failed = true;
            }
            out.line(format!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.relation));
            rows.push(json!({"lambda": ring.render(&l), "mu": ring.render(&m), "check": c}));
        }
    }
    Ok(json!({"ring": ring.describe(), "generators": pres.generators, "checks": rows}))
}

fn afemb(p: &Polytope, seed: u64, out: &mut Outcome) -> Result<Value, CliError> {
    let t = columns::column_vectors(p);
    let mut rows = Vec::new();
    for f in t.base_facets() {
        let rep = algebra::same_base_embedding_check(p, &t, f, seed)?;
        out.failed |= !rep.pass();
        out.line(format!(
            "{} facet {f}: {} columns, {} samples",
            if rep.pass() { "pass" } else { "FAIL" },
            rep.columns.len(),
            rep.samples
        ));
        rows.push(serde_json::to_value(&rep).expect("serializable"));
    }
    Ok(json!({"facets": rows}))
}

fn trivcen_star(p: &Polytope, out: &mut Outcome) -> Result<Value, CliError> {
    let t = columns::column_vectors(p);
    let mut rows = Vec::new();
    for w in 0..t.len() {
        let rep = algebra::conjugation_check(p, &t, w)?;
        out.failed |= !rep.pass;
        out.line(format!("{} {}: ratio {}", if rep.pass { "pass" } else { "FAIL" }, rep.column, rep.ratio));
        rows.push(serde_json::to_value(&rep).expect("serializable"));
    }
    Ok(json!({"columns": rows}))
}

fn welldef(p: &Polytope, out: &mut Outcome) -> Result<Value, CliError> {
    let n = p.facets().len();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let (pass, detail) = match doubling::reorder_iso(p, &[a, b], &[1, 0]) {
                Ok(iso) => (true, format!("{} lattice points", iso.points.len())),
                Err(polykit::Error::Internal(m)) => (false, m),
                Err(e) => return Err(e.into()),
            };
            out.failed |= !pass;
            out.line(format!("{} facets {a},{b}: {detail}", if pass { "pass" } else { "FAIL" }));
            rows.push(json!({"facets": [a, b], "pass": pass, "detail": detail}));
        }
    }
    Ok(json!({"pairs": rows}))
}

fn colbal(p: &Polytope, out: &mut Outcome) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for f in 0..p.facets().len() {
        let d = doubling::double(p, f)?;
        let lifted = doubling::lift_columns(&d)?;
        let found: BTreeSet<Vec<Int>> = columns::column_vectors(&d.result).columns.into_iter().map(|c| c.v).collect();
        let predicted: BTreeSet<Vec<Int>> = lifted.table.columns.iter().map(|c| c.v.clone()).collect();
        let extra: Vec<String> = found.difference(&predicted).map(|v| scalar::fmt_vec(v)).collect();
        let equations = d.check_equations().is_empty();
        let pass = equations && predicted.is_subset(&found) && (!lifted.complete || extra.is_empty());
        out.failed |= !pass;
        out.line(format!(
            "{} facet {f}: {} lifted, {} computed, lifting {}{}",
            if pass { "pass" } else { "FAIL" },
            predicted.len(),
            found.len(),
            if lifted.complete { "complete" } else { "partial" },
            if extra.is_empty() { String::new() } else { format!(", extra {}", extra.join(" ")) }
        ));
        rows.push(json!({
            "facet": f,
            "pass": pass,
            "equations_hold": equations,
            "lifting_complete": lifted.complete,
            "lifted": predicted.len(),
            "computed": found.len(),
            "extra_columns": extra,
        }));
    }
    Ok(json!({"facets": rows}))
}

fn matrix_model(args: &ModelArgs, spec: &RingSpec, seed: u64, out: &mut Outcome) -> Result<Value, CliError> {
    let class = match args.kind {
        ModelKind::B => ModelClass::B,
        ModelKind::C => ModelClass::C,
        ModelKind::D => ModelClass::D { t: args.t },
    };
    let moduli: Vec<u32> = match spec {
        RingSpec::Modular(m) => vec![u32::try_from(m).map_err(|_| CliError::Usage("modulus too large for a matrix model".into()))?],
        RingSpec::Integers => vec![2, 3],
        RingSpec::Polynomial(_) => return Err(CliError::Usage("matrix models run over int or mod:<m>".into())),
    };
    let model = IndexModel::new(class, args.j)?;
    let rep = steinberg::check_model(&model, &moduli)?;
    let sub = steinberg::uv_subgroup_checks(&model, moduli[0], seed)?;
    let centrality_ok = match sub.centrality {
        Centrality::Trivial => true,
        Centrality::NotApplicable => args.j == 1,
        Centrality::Nontrivial => false,
    };
    let subgroups_ok = sub.commute && sub.homomorphism && sub.injective;
    out.failed = !(rep.pass() && subgroups_ok && centrality_ok);
    out.line(format!(
        "model {class}, j={}: {}x{} matrices, {} generators",
        args.j, rep.size, rep.size, rep.generators
    ));
    out.line(format!(
        "relations: {} symbolic failures, modular failures {:?}, block shape {}",
        rep.symbolic_failures.len(),
        rep.modular,
        rep.block_shape
    ));
    out.line(format!(
        "subgroups: commute {}, homomorphism {}, injective {} ({} tuples), centrality {:?}",
        sub.commute, sub.homomorphism, sub.injective, sub.tuples_checked, sub.centrality
    ));
    Ok(json!({"relations": rep, "subgroups": sub}))
}

/// Apply the sign switch along a column `v` with `-v` also a column and
/// compare with the action predicted line by line: on a line parallel to
/// `v` with `k` lattice points the word acts by `(-1)^(k-1)`.
fn nfiltun<R: Ring>(p: &Polytope, ring: &R, out: &mut Outcome) -> Result<Value, CliError> {
    let doubled;
    let q = match p.dim() {
        1 => {
            doubled = doubling::double(p, 0)?;
            out.line("doubled the segment along facet 0");
            &doubled.result
        }
        2 => p,
        d => return Err(polykit::Error::Precondition(format!("nfiltun needs a segment or a polygon, got dim {d}")).into()),
    };
    let t = columns::column_vectors(q);
    let v = t
        .columns
        .iter()
        .map(|c| c.v.clone())
        .find(|v| t.index_of(&scalar::neg(v)).is_some())
        .ok_or_else(|| polykit::Error::Precondition("no column v with -v also a column".into()))?;
    let two_is_zero = ring.is_zero(&ring.from_i64(2));
    let eps = algebra::sign_switch(ring, &v);
    let mut rows = Vec::new();
    let mut identity = true;
    for (x, act) in algebra::point_actions(q, ring, &eps)? {
        let on_line = q
            .lattice_points()
            .iter()
            .filter(|y| {
                let d = scalar::sub(y, &x);
                scalar::is_zero_vec(&cross2(&d, &v))
            })
            .count();
        let want = if on_line % 2 == 0 && !two_is_zero { PointAction::Negated } else { PointAction::Fixed };
        identity &= act == PointAction::Fixed;
        out.failed |= act != want;
        out.line(format!("{:<10} {:?} (expected {:?})", scalar::fmt_vec(&x), act, want));
        rows.push(json!({"point": scalar::fmt_vec(&x), "action": act, "expected": want}));
    }
    out.line(if identity { "the word acts as the identity" } else { "the word is not the identity" });
    Ok(json!({"ring": ring.describe(), "column": scalar::fmt_vec(&v), "identity": identity, "points": rows}))
}

/// The determinant of two plane vectors, as a one-element vector.
fn cross2(a: &[Int], b: &[Int]) -> Vec<Int> {
    vec![&a[0] * &b[1] - &a[1] * &b[0]]
}

pub fn run(
    check: Check,
    p: Option<&Polytope>,
    model: Option<ModelArgs>,
    spec: &RingSpec,
    seed: u64,
) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Value::Null);
    let need = || p.ok_or_else(|| CliError::Usage("this check needs a polytope file".into()));
    let results = match check {
        Check::Comrel => with_ring!(spec, r => comrel(need()?, &r, spec, seed, &mut out)?),
        Check::Pi => with_ring!(spec, r => pi(need()?, &r, spec, seed, &mut out)?),
        Check::Afemb => afemb(need()?, seed, &mut out)?,
        Check::TrivcenStar => trivcen_star(need()?, &mut out)?,
        Check::Welldef => welldef(need()?, &mut out)?,
        Check::Colbal => colbal(need()?, &mut out)?,
        Check::MatrixModel => {
            let m = model.ok_or_else(|| CliError::Usage("matrix-model needs a class: b, c or d".into()))?;
            matrix_model(&m, spec, seed, &mut out)?
        }
        Check::Nfiltun => with_ring!(spec, r => nfiltun(need()?, &r, &mut out)?),
    };
    out.results = results;
    Ok(out)
}
