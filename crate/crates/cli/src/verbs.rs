use std::sync::Arc;

use fcrystal_core::blocks::{abelian_from_ap, lattice_block, tate, torus_block, LatticeData, TorusData};
use fcrystal_core::doc::{
    divisor_from_value, elem_from_value, elem_to_value, int_matrix_from_value, int_matrix_to_value,
    module_from_value, module_to_value, ring_from_value, simplicial_from_value, slopes_to_value,
    spec_from_value, spec_to_value, wmatrix_to_value,
};
use fcrystal_core::motive::{
    assemble, cartier_dual, check_pairing, pair, tdr_dimension, torsion_height, verify_motive,
    MotiveCrystal, OneMotiveSpec,
};
use fcrystal_core::semilinear::{newton_slopes, FilteredFModule, Violation};
use fcrystal_core::simplicial::{
    component_complex, cocharacter_group, div0_lattice, h1_weight_ledger, picard_skeleton,
    PicardSkeleton,
};
use fcrystal_core::witt::{WittCoords, WittRing};
use fcrystal_core::{Error, ErrorKind};
use serde_json::{json, Map, Value};

use crate::{Failure, Options, Report, Verb};

type Out = Result<Report, Failure>;

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::from(Error::Malformed(msg.into()))
}

fn object(doc: &Value, verb: Verb) -> Result<&Map<String, Value>, Failure> {
    doc.as_object().ok_or_else(|| malformed(format!("{verb} input must be an object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, Failure> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field \"{key}\"")))
}

fn ring_of(obj: &Map<String, Value>) -> Result<Arc<WittRing>, Failure> {
    Ok(ring_from_value(field(obj, "ring")?)?)
}

fn single(docs: &[Value], verb: Verb) -> Result<&Value, Failure> {
    match docs {
        [d] => Ok(d),
        _ => Err(malformed(format!("{verb} takes exactly one input"))),
    }
}

fn pair_value(ij: Option<(usize, usize)>) -> Value {
    ij.map_or(Value::Null, |(i, j)| json!([i, j]))
}

fn violation_value(v: &Violation) -> Value {
    let (kind, op, row, col) = match *v {
        Violation::Flag { op, row, col } => ("flag", Some(op.to_string()), row, col),
        Violation::FrobeniusVerschiebung { row, col } => ("frobenius-verschiebung", None, row, col),
        Violation::VerschiebungFrobenius { row, col } => ("verschiebung-frobenius", None, row, col),
    };
    json!({ "kind": kind, "operator": op, "row": row, "col": col, "message": v.to_string() })
}

/// Dispatch one verb over its input documents (already overridden).
pub fn execute(verb: Verb, docs: &[Value], opts: &Options) -> Out {
    match verb {
        Verb::CrystalTensor => crystal_tensor(docs),
        _ => {
            let doc = single(docs, verb)?;
            match verb {
                Verb::WittEval => witt_eval(object(doc, verb)?),
                Verb::CrystalVerify => crystal_verify(doc),
                Verb::CrystalSlopes => {
                    let m = module_from_value(doc, None)?;
                    Ok(Report::ok(json!({ "slopes": slopes_to_value(&newton_slopes(&m)?) })))
                }
                Verb::CrystalDual => {
                    let m = module_from_value(doc, None)?.with_derived_v()?;
                    Ok(Report::ok(module_to_value(&m.twisted_dual()?)))
                }
                Verb::CrystalTwist => crystal_twist(object(doc, verb)?),
                Verb::CrystalBlock => crystal_block(object(doc, verb)?),
                Verb::MotiveAssemble => {
                    let s = spec_from_value(doc, None)?;
                    let m = assemble(&s)?;
                    Ok(Report::ok(json!({ "label": s.label(), "module": module_to_value(m.module()) })))
                }
                Verb::MotiveVerify => motive_verify(object(doc, verb)?),
                Verb::MotiveDual => Ok(Report::ok(spec_to_value(&cartier_dual(&spec_from_value(doc, None)?)?))),
                Verb::MotivePair => motive_pair(&spec_from_value(doc, None)?),
                Verb::MotiveHeight => motive_height(&spec_from_value(doc, None)?, opts.torsion),
                Verb::SimplicialCochar => simplicial_cochar(doc),
                Verb::SimplicialDiv0 => {
                    let d = div0_lattice(&divisor_from_value(doc)?)?;
                    Ok(Report::ok(json!({ "rank": d.rank, "basis": int_matrix_to_value(&d.basis) })))
                }
                Verb::PicardSkeleton => picard(object(doc, verb)?),
                Verb::H1Ledger => ledger(object(doc, verb)?),
                Verb::CrystalTensor => unreachable!("handled above"),
            }
        }
    }
}

fn witt_eval(obj: &Map<String, Value>) -> Out {
    let ring = ring_of(obj)?;
    let op = field(obj, "op")?.as_str().ok_or_else(|| malformed("op must be a string"))?;
    let args = match obj.get("args") {
        Some(Value::Array(a)) => a.as_slice(),
        Some(_) => return Err(malformed("args must be a list")),
        None => &[],
    };
    let arity = match op {
        "add" | "sub" | "mul" => 2,
        _ => 1,
    };
    if args.len() != arity {
        return Err(malformed(format!("{op} takes {arity} argument(s), got {}", args.len())));
    }
    let elem = |i: usize| elem_from_value(&ring, &args[i]);
    let result = match op {
        "add" => elem_to_value(&elem(0)?.checked_add(&elem(1)?)?),
        "sub" => elem_to_value(&elem(0)?.checked_sub(&elem(1)?)?),
        "mul" => elem_to_value(&elem(0)?.checked_mul(&elem(1)?)?),
        "neg" => elem_to_value(&elem(0)?.neg()),
        "inverse" => elem_to_value(&elem(0)?.inverse()?),
        "frobenius" => elem_to_value(&elem(0)?.frobenius()),
        "frobenius-inv" => elem_to_value(&elem(0)?.frobenius_inv()),
        "exp" => elem_to_value(&ring.dp_exp(&elem(0)?)?),
        "log" => elem_to_value(&ring.dp_log(&elem(0)?)?),
        "valuation" => json!(elem(0)?.valuation()),
        "residue" => json!(elem(0)?.residue()),
        "teichmuller" => {
            let c = args[0]
                .as_array()
                .ok_or_else(|| malformed("teichmuller takes a residue coefficient list"))?
                .iter()
                .map(|c| c.as_u64().ok_or_else(|| malformed("residue coefficients must be non-negative integers")))
                .collect::<Result<Vec<_>, _>>()?;
            elem_to_value(&ring.teichmuller(&c)?)
        }
        "witt-coords" => json!(WittCoords::from_elem(&elem(0)?)?.digits()),
        "from-witt-coords" => {
            let digits = args[0]
                .as_array()
                .ok_or_else(|| malformed("from-witt-coords takes a digit list"))?
                .iter()
                .map(|c| c.as_u64().ok_or_else(|| malformed("digits must be non-negative integers")))
                .collect::<Result<Vec<_>, _>>()?;
            elem_to_value(&WittCoords::new(ring.p(), digits)?.to_elem(&ring)?)
        }
        other => return Err(malformed(format!("unknown witt-eval op \"{other}\""))),
    };
    Ok(Report::ok(json!({ "op": op, "result": result })))
}

fn crystal_verify(doc: &Value) -> Out {
    let m = module_from_value(doc, None)?;
    let derived = m.v().is_none();
    let (m, v_error) = match m.with_derived_v() {
        Ok(full) => (full, None),
        Err(e) if e.kind() == ErrorKind::Verification => (m, Some(e)),
        Err(e) => return Err(e.into()),
    };
    let report = m.verify();
    let violations: Vec<Value> = report.violations.iter().map(violation_value).collect();
    let passed = report.passed() && v_error.is_none();
    Ok(Report {
        passed,
        value: json!({
            "passed": passed,
            "v_derived": derived,
            "v_error": v_error.map(|e| json!({ "code": e.code(), "message": e.to_string() })),
            "violations": violations,
        }),
    })
}

fn crystal_tensor(docs: &[Value]) -> Out {
    let mut modules = docs.iter().map(|d| module_from_value(d, None));
    let first = modules.next().ok_or_else(|| malformed("crystal-tensor needs at least one input"))??;
    let product = modules.try_fold(first, |acc, m| acc.tensor(&m?))?;
    Ok(Report::ok(module_to_value(&product)))
}

fn twist_exponent(obj: &Map<String, Value>) -> Result<i32, Failure> {
    field(obj, "m")?
        .as_i64()
        .and_then(|m| i32::try_from(m).ok())
        .ok_or_else(|| malformed("m must be an integer"))
}

fn crystal_twist(obj: &Map<String, Value>) -> Out {
    let ring = ring_of(obj)?;
    let t = tate(twist_exponent(obj)?, &ring);
    let out = match obj.get("module").filter(|m| !m.is_null()) {
        Some(m) => module_from_value(m, Some(&ring))?.with_derived_v()?.tensor(&t)?,
        None => t,
    };
    Ok(Report::ok(module_to_value(&out)))
}

fn crystal_block(obj: &Map<String, Value>) -> Out {
    let ring = ring_of(obj)?;
    let kind = field(obj, "block")?.as_str().ok_or_else(|| malformed("block must be a string"))?;
    let action = || -> Result<_, Failure> {
        let rank = field(obj, "rank")?.as_u64().ok_or_else(|| malformed("rank must be a non-negative integer"))?;
        match obj.get("sigma").filter(|s| !s.is_null()) {
            Some(s) => Ok(int_matrix_from_value(s, rank as usize)?),
            None => Ok(fcrystal_core::semilinear::IntMatrix::identity(rank as usize)),
        }
    };
    let module: FilteredFModule = match kind {
        "tate" => tate(twist_exponent(obj)?, &ring),
        "lattice" => lattice_block(&LatticeData::new(action()?)?, &ring),
        "torus" => torus_block(&TorusData::new(action()?)?, &ring),
        "abelian" => {
            let ap = field(obj, "ap")?.as_i64().ok_or_else(|| malformed("ap must be an integer"))?;
            abelian_from_ap(ap, &ring)?.crystal().clone()
        }
        other => return Err(malformed(format!("unknown block \"{other}\""))),
    };
    Ok(Report::ok(module_to_value(&module)))
}

fn motive_verify(obj: &Map<String, Value>) -> Out {
    let crystal = match obj.get("spec") {
        Some(spec) => {
            let s = spec_from_value(spec, None)?;
            let module = module_from_value(field(obj, "module")?, Some(s.ring()))?;
            MotiveCrystal::from_parts(module, s)?
        }
        None => assemble(&spec_from_value(&Value::Object(obj.clone()), None)?)?,
    };
    let rep = verify_motive(&crystal);
    let items: Vec<Value> = rep
        .items
        .iter()
        .map(|i| json!({ "id": i.id, "passed": i.passed, "detail": i.detail }))
        .collect();
    let (gr0, gr1, gr2) = rep.graded_ranks;
    Ok(Report {
        passed: rep.passed(),
        value: json!({
            "label": crystal.provenance().label(),
            "passed": rep.passed(),
            "items": items,
            "graded_ranks": { "0": gr0, "-1": gr1, "-2": gr2 },
            "gram": rep.gram.as_ref().map_or(Value::Null, wmatrix_to_value),
        }),
    })
}

fn motive_pair(s: &OneMotiveSpec) -> Out {
    let m = assemble(s)?;
    let m_dual = assemble(&cartier_dual(s)?)?;
    let gram = pair(&m, &m_dual)?;
    let check = check_pairing(m.module(), m_dual.module(), &gram)?;
    Ok(Report {
        passed: check.passed(),
        value: json!({
            "label": s.label(),
            "gram": wmatrix_to_value(&gram),
            "passed": check.passed(),
            "perfect": check.perfect,
            "weight_orthogonal_violation": pair_value(check.weight_orthogonal),
            "frobenius_violation": pair_value(check.frobenius),
            "verschiebung_violation": pair_value(check.verschiebung),
        }),
    })
}

fn motive_height(s: &OneMotiveSpec, n: u32) -> Out {
    if n == 0 {
        return Err(malformed("torsion level must be positive"));
    }
    let (height, exponent) = torsion_height(s, n);
    let rank = assemble(s)?.module().rank();
    let tdr = tdr_dimension(s);
    Ok(Report {
        passed: rank == height && rank == tdr,
        value: json!({
            "label": s.label(),
            "height": height,
            "torsion_level": n,
            "order_exponent": exponent,
            "tdr_dimension": tdr,
            "assembled_rank": rank,
        }),
    })
}

fn simplicial_cochar(doc: &Value) -> Out {
    let s = simplicial_from_value(doc)?;
    let cx = component_complex(&s)?;
    let g = cocharacter_group(&s)?;
    let passed = g.torsion_free() && g.image_direct_summand;
    Ok(Report {
        passed,
        value: json!({
            "d1": int_matrix_to_value(&cx.d1),
            "d2": int_matrix_to_value(&cx.d2),
            "rank": g.rank,
            "basis": int_matrix_to_value(&g.basis),
            "torsion": g.torsion,
            "torsion_free": g.torsion_free(),
            "image_direct_summand": g.image_direct_summand,
        }),
    })
}

fn skeleton_of(obj: &Map<String, Value>) -> Result<PicardSkeleton, Failure> {
    let s = simplicial_from_value(field(obj, "simplicial")?)?;
    let d = divisor_from_value(field(obj, "divisor")?)?;
    let g = field(obj, "genus")?
        .as_u64()
        .ok_or_else(|| malformed("genus must be a non-negative integer"))?;
    Ok(picard_skeleton(&s, &d, g as usize)?)
}

fn skeleton_value(sk: &PicardSkeleton) -> Value {
    json!({
        "lattice_rank": sk.lattice_rank,
        "torus_rank": sk.torus_rank,
        "abelian_dim": sk.abelian_dim,
    })
}

fn picard(obj: &Map<String, Value>) -> Out {
    let sk = skeleton_of(obj)?;
    let mut out = Map::new();
    out.insert("skeleton".into(), skeleton_value(&sk));
    if obj.contains_key("ring") {
        let label = obj.get("label").and_then(Value::as_str).unwrap_or("picard");
        out.insert("spec".into(), spec_to_value(&sk.to_spec(&ring_of(obj)?, None, label)?));
    }
    Ok(Report::ok(Value::Object(out)))
}

fn ledger(obj: &Map<String, Value>) -> Out {
    let sk = skeleton_of(obj)?;
    let l = h1_weight_ledger(&sk, &ring_of(obj)?)?;
    Ok(Report {
        passed: l.consistent(),
        value: json!({
            "skeleton": skeleton_value(&sk),
            "gr0": l.gr0,
            "gr1": l.gr1,
            "gr2": l.gr2,
            "total": l.total,
            "assembled_rank": l.assembled_rank,
            "consistent": l.consistent(),
        }),
    })
}
