//! JSON documents.
//!
//! Elements are read from an integer or from a list of at most `a`
//! coefficients (low-to-high, negatives allowed) and always written as a list
//! of exactly `a` canonical coefficients in `[0, p^n)`. Documents nested in a
//! larger document (an abelian crystal inside a 1-motive spec) take the ring
//! of the enclosing document; their own `"ring"` key is ignored on input and
//! omitted on output. Output objects go through `serde_json::Value`, so keys
//! come out sorted.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::blocks::{abelian_from_ap, AbelianBlock, LatticeData, TorusData};
use crate::error::{Error, Result};
use crate::motive::{ExtData, OneMotiveSpec};
use crate::semilinear::{FilteredFModule, IntMatrix, SlopeProfile, WMatrix};
use crate::simplicial::{DivisorPresentation, SimplicialComponents};
use crate::witt::{RingParams, WittElem, WittRing};

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(format!("{what} must be an object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field \"{key}\"")))
}

/// `obj[key]` unless absent or null.
fn optional<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn known_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(malformed(format!("unknown field \"{k}\" in {what}"))),
        None => Ok(()),
    }
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| malformed(format!("{what} must be an integer")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| malformed(format!("{what} must be a non-negative integer")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    u32::try_from(as_u64(v, what)?).map_err(|_| malformed(format!("{what} is too large")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    usize::try_from(as_u64(v, what)?).map_err(|_| malformed(format!("{what} is too large")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what} must be a list")))
}

pub fn ring_params_from_value(v: &Value) -> Result<RingParams> {
    let obj = object(v, "ring")?;
    let p = as_u64(field(obj, "p")?, "p")?;
    let n = as_u32(field(obj, "n")?, "n")?;
    let a = optional(obj, "a").map_or(Ok(1), |v| as_u32(v, "a"))?;
    let modulus = optional(obj, "modulus")
        .map(|m| {
            as_array(m, "modulus")?
                .iter()
                .map(|c| as_i64(c, "modulus coefficient"))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    RingParams::new(p, n, a, modulus)
}

pub fn ring_from_value(v: &Value) -> Result<Arc<WittRing>> {
    Ok(WittRing::new(ring_params_from_value(v)?))
}

pub fn ring_to_value(ring: &WittRing) -> Value {
    let params = ring.params();
    let mut obj = Map::new();
    obj.insert("p".into(), json!(params.p));
    obj.insert("n".into(), json!(params.n));
    obj.insert("a".into(), json!(params.a));
    if params.a > 1 {
        obj.insert("modulus".into(), json!(params.modulus));
    }
    Value::Object(obj)
}

pub fn elem_from_value(ring: &Arc<WittRing>, v: &Value) -> Result<WittElem> {
    if let Some(x) = v.as_i64() {
        return Ok(ring.from_int(x));
    }
    let list = as_array(v, "element")?;
    let a = ring.a() as usize;
    if list.len() > a {
        return Err(malformed(format!("element has {} coefficients, a = {a}", list.len())));
    }
    let mut coeffs = list
        .iter()
        .map(|c| as_i64(c, "element coefficient"))
        .collect::<Result<Vec<_>>>()?;
    coeffs.resize(a, 0);
    ring.from_coeffs(&coeffs)
}

pub fn elem_to_value(e: &WittElem) -> Value {
    json!(e.coords())
}

fn rows_of<'a>(v: &'a Value, what: &str) -> Result<Vec<&'a Vec<Value>>> {
    as_array(v, what)?.iter().map(|r| as_array(r, what)).collect()
}

pub fn wmatrix_from_value(ring: &Arc<WittRing>, v: &Value) -> Result<WMatrix> {
    let rows = rows_of(v, "matrix")?
        .into_iter()
        .map(|r| r.iter().map(|e| elem_from_value(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    WMatrix::from_rows(ring, rows).map_err(|e| malformed(e.to_string()))
}

/// Like [`wmatrix_from_value`], but an entry-free value stands for the zero
/// matrix of an expected empty shape.
fn wmatrix_shaped(ring: &Arc<WittRing>, v: Option<&Value>, rows: usize, cols: usize) -> Result<WMatrix> {
    let Some(v) = v else {
        return Ok(WMatrix::zeros(ring, rows, cols));
    };
    let m = wmatrix_from_value(ring, v)?;
    if m.rows() * m.cols() == 0 && rows * cols == 0 {
        return Ok(WMatrix::zeros(ring, rows, cols));
    }
    Ok(m)
}

pub fn wmatrix_to_value(m: &WMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(elem_to_value).collect()))
            .collect(),
    )
}

/// Integer matrix; an empty list has `cols` columns.
pub fn int_matrix_from_value(v: &Value, cols: usize) -> Result<IntMatrix> {
    let rows = rows_of(v, "integer matrix")?
        .into_iter()
        .map(|r| r.iter().map(|e| as_i64(e, "matrix entry")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, cols));
    }
    IntMatrix::from_rows(&rows).map_err(|e| malformed(e.to_string()))
}

pub fn int_matrix_to_value(m: &IntMatrix) -> Value {
    json!(m.row_vecs())
}

/// Module document. `ring` is used when given; otherwise the document's own
/// `"ring"` key is read.
pub fn module_from_value(v: &Value, ring: Option<&Arc<WittRing>>) -> Result<FilteredFModule> {
    let obj = object(v, "module")?;
    let ring = match ring {
        Some(r) => Arc::clone(r),
        None => ring_from_value(field(obj, "ring")?)?,
    };
    let weights = as_array(field(obj, "weights")?, "weights")?
        .iter()
        .map(|w| {
            let w = as_i64(w, "weight")?;
            i32::try_from(w).map_err(|_| malformed("weight out of range"))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = optional(obj, "rank") {
        if as_usize(r, "rank")? != weights.len() {
            return Err(malformed("rank does not match the number of weights"));
        }
    }
    let f = wmatrix_shaped(&ring, Some(field(obj, "F")?), weights.len(), weights.len())?;
    let v = optional(obj, "V")
        .map(|m| wmatrix_shaped(&ring, Some(m), weights.len(), weights.len()))
        .transpose()?;
    let level = optional(obj, "level").map_or(Ok(1), |l| as_u32(l, "level"))?;
    FilteredFModule::new(f, v, weights, level).map_err(|e| match e {
        Error::Shape(m) => malformed(m),
        other => other,
    })
}

fn module_fields(m: &FilteredFModule) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("rank".into(), json!(m.rank()));
    obj.insert("weights".into(), json!(m.weights()));
    obj.insert("F".into(), wmatrix_to_value(m.f()));
    obj.insert("V".into(), m.v().map_or(Value::Null, wmatrix_to_value));
    obj.insert("level".into(), json!(m.level()));
    obj
}

pub fn module_to_value(m: &FilteredFModule) -> Value {
    let mut obj = module_fields(m);
    obj.insert("ring".into(), ring_to_value(m.ring()));
    Value::Object(obj)
}

pub fn slopes_to_value(s: &SlopeProfile) -> Value {
    Value::Array(
        s.segments()
            .iter()
            .map(|(slope, mult)| json!({ "slope": slope.to_string(), "mult": mult }))
            .collect(),
    )
}

fn action_from_value(v: Option<&Value>) -> Result<IntMatrix> {
    let Some(v) = v else {
        return Ok(IntMatrix::identity(0));
    };
    let obj = object(v, "lattice data")?;
    let rank = as_usize(field(obj, "rank")?, "rank")?;
    let action = match optional(obj, "sigma") {
        Some(s) => int_matrix_from_value(s, rank)?,
        None => IntMatrix::identity(rank),
    };
    if action.rows() != rank || action.cols() != rank {
        return Err(malformed(format!("sigma must be {rank}x{rank}")));
    }
    Ok(action)
}

fn action_to_value(action: &IntMatrix) -> Value {
    json!({ "rank": action.rows(), "sigma": int_matrix_to_value(action) })
}

fn abelian_from_value(ring: &Arc<WittRing>, v: Option<&Value>) -> Result<AbelianBlock> {
    let Some(v) = v else {
        return Ok(AbelianBlock::zero(ring));
    };
    let obj = object(v, "abelian")?;
    match (optional(obj, "ap"), optional(obj, "crystal")) {
        (Some(ap), None) => abelian_from_ap(as_i64(ap, "ap")?, ring),
        (None, Some(c)) => AbelianBlock::new(module_from_value(c, Some(ring))?),
        _ => Err(malformed("abelian must have exactly one of \"ap\" and \"crystal\"")),
    }
}

pub fn spec_from_value(v: &Value, ring: Option<&Arc<WittRing>>) -> Result<OneMotiveSpec> {
    let obj = object(v, "1-motive spec")?;
    known_keys(obj, &["ring", "lattice", "torus", "abelian", "ext", "label"], "1-motive spec")?;
    let ring = match ring {
        Some(r) => Arc::clone(r),
        None => ring_from_value(field(obj, "ring")?)?,
    };
    let lattice = LatticeData::new(action_from_value(optional(obj, "lattice"))?)?;
    let torus = TorusData::new(action_from_value(optional(obj, "torus"))?)?;
    let abelian = abelian_from_value(&ring, optional(obj, "abelian"))?;
    let (t, g2, x) = (torus.rank(), 2 * abelian.dim(), lattice.rank());
    let empty = Map::new();
    let ext = match optional(obj, "ext") {
        Some(e) => {
            let e = object(e, "ext")?;
            known_keys(e, &["AT", "XT", "XA"], "ext")?;
            e
        }
        None => &empty,
    };
    let ext = ExtData {
        at: wmatrix_shaped(&ring, optional(ext, "AT"), t, g2)?,
        xt: wmatrix_shaped(&ring, optional(ext, "XT"), t, x)?,
        xa: wmatrix_shaped(&ring, optional(ext, "XA"), g2, x)?,
    };
    let label = match optional(obj, "label") {
        Some(l) => l.as_str().ok_or_else(|| malformed("label must be a string"))?.to_string(),
        None => String::new(),
    };
    OneMotiveSpec::new(&ring, lattice, torus, abelian, ext, label)
}

pub fn spec_to_value(s: &OneMotiveSpec) -> Value {
    let abelian = if s.abelian().dim() == 0 {
        Value::Null
    } else {
        json!({ "crystal": Value::Object(module_fields(s.abelian().crystal())) })
    };
    json!({
        "ring": ring_to_value(s.ring()),
        "lattice": action_to_value(s.lattice().action()),
        "torus": action_to_value(s.torus().action()),
        "abelian": abelian,
        "ext": {
            "AT": wmatrix_to_value(&s.ext().at),
            "XT": wmatrix_to_value(&s.ext().xt),
            "XA": wmatrix_to_value(&s.ext().xa),
        },
        "label": s.label(),
    })
}

pub fn simplicial_from_value(v: &Value) -> Result<SimplicialComponents> {
    let obj = object(v, "simplicial")?;
    let counts = as_array(field(obj, "counts")?, "counts")?
        .iter()
        .map(|c| as_usize(c, "count"))
        .collect::<Result<Vec<_>>>()?;
    let faces_obj = object(field(obj, "faces")?, "faces")?;
    let mut faces = Vec::new();
    for j in 1..counts.len() {
        let level = field(faces_obj, &j.to_string())?;
        let maps = as_array(level, "face list")?
            .iter()
            .map(|m| {
                as_array(m, "face map")?
                    .iter()
                    .map(|c| as_usize(c, "component index"))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        faces.push(maps);
    }
    if let Some(extra) = faces_obj.keys().find(|k| {
        k.parse::<usize>().map_or(true, |j| j == 0 || j >= counts.len())
    }) {
        return Err(malformed(format!("unexpected face level \"{extra}\"")));
    }
    SimplicialComponents::new(counts, faces)
}

pub fn simplicial_to_value(s: &SimplicialComponents) -> Value {
    let mut faces = Map::new();
    for j in 1..s.counts().len() {
        let maps: Vec<&[usize]> = (0..=j).map(|i| s.face(j, i)).collect();
        faces.insert(j.to_string(), json!(maps));
    }
    json!({ "counts": s.counts(), "faces": faces })
}

pub fn divisor_from_value(v: &Value) -> Result<DivisorPresentation> {
    let obj = object(v, "divisor")?;
    let m = as_usize(field(obj, "m")?, "m")?;
    let p0 = int_matrix_from_value(field(obj, "P0")?, m)?;
    let p1 = int_matrix_from_value(field(obj, "P1")?, m)?;
    let ns = match optional(obj, "NS") {
        Some(ns) => int_matrix_from_value(ns, m)?,
        None => IntMatrix::zeros(0, m),
    };
    DivisorPresentation::new(m, p0, p1, ns).map_err(|e| malformed(e.to_string()))
}

pub fn divisor_to_value(d: &DivisorPresentation) -> Value {
    json!({
        "m": d.m(),
        "P0": int_matrix_to_value(d.p0()),
        "P1": int_matrix_to_value(d.p1()),
        "NS": int_matrix_to_value(d.ns()),
    })
}
