//! Versioned JSON forms of objects, morphisms, ordered sets, profiles and
//! functor descriptions.
//!
//! Every document is `{"version": 1, "kind": "...", "data": {...}}`.
//! Components are keyed by their canonical label (`0,1:LBR|RL`) and scalars
//! are exact strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::delannic::{DelannicProfile, DelannicType, GammaConvention};
use crate::error::{Error, Result};
use crate::functor::TensorFunctor;
use crate::linear::Morphism;
use crate::measure::MeasureSpec;
use crate::orbit::{Component, GSet, OrbitSymbol, Word};
use crate::order::{OrderExpr, OrderedGSet};
use crate::scalar::{Field, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    kind: String,
    data: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDoc {
    pub shape: usize,
    pub orbits: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub factors: Vec<usize>,
    pub field: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub measure: MeasureDoc,
    pub source: GSetDoc,
    pub target: GSetDoc,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderedDoc {
    pub carrier: GSetDoc,
    pub less: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub field: String,
    pub dim: String,
    pub gamma1: Vec<String>,
    pub gamma2: Vec<String>,
    pub convention: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub source_type: u8,
    pub target: MeasureDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<OrderedDoc>,
}

fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Serialization(format!("at {path}: {e}"))
}

fn wrap<T: Serialize>(kind: &str, data: &T) -> serde_json::Value {
    let data = serde_json::to_value(data).expect("documents serialize");
    serde_json::to_value(Document { version: SCHEMA_VERSION, kind: kind.into(), data }).expect("documents serialize")
}

fn unwrap<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Serialization(format!("at {}: {}", e.path(), e.inner())))?;
    if doc.version != SCHEMA_VERSION {
        return Err(Error::Serialization(format!("at version: unsupported schema version {}", doc.version)));
    }
    if doc.kind != kind {
        return Err(Error::Serialization(format!("at kind: expected {kind:?}, found {:?}", doc.kind)));
    }
    serde_path_to_error::deserialize(doc.data)
        .map_err(|e| Error::Serialization(format!("at data.{}: {}", e.path(), e.inner())))
}

/// Kind tag of a document, if it parses as one.
pub fn document_kind(text: &str) -> Result<String> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| Error::Serialization(format!("at document: {e}")))?;
    Ok(doc.kind)
}

pub fn gset_doc(x: &GSet) -> GSetDoc {
    GSetDoc { shape: x.shape(), orbits: x.orbits().iter().map(|o| o.arities().to_vec()).collect() }
}

fn gset_from(d: &GSetDoc, path: &str) -> Result<GSet> {
    let orbits = d
        .orbits
        .iter()
        .enumerate()
        .map(|(i, a)| OrbitSymbol::new(a.clone()).map_err(at(&format!("{path}.orbits[{i}]"))))
        .collect::<Result<Vec<_>>>()?;
    GSet::new(d.shape, orbits).map_err(at(path))
}

fn measure_doc(m: &MeasureSpec) -> MeasureDoc {
    MeasureDoc { factors: m.factors().to_vec(), field: m.field().name() }
}

fn measure_from(d: &MeasureDoc, path: &str) -> Result<MeasureSpec> {
    let field = Field::parse(&d.field).map_err(at(&format!("{path}.field")))?;
    MeasureSpec::new(d.factors.clone(), field).map_err(at(&format!("{path}.factors")))
}

/// Inverse of `Component::label` for two-slot components.
pub fn parse_component(s: &str) -> Result<Component> {
    let bad = |m: &str| Error::InvalidPattern(format!("{m} in {s:?}"));
    let (orbits, words) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let orbits = orbits
        .split(',')
        .map(|o| o.trim().parse::<usize>().map_err(|_| bad("bad orbit index")))
        .collect::<Result<Vec<_>>>()?;
    if orbits.len() != 2 {
        return Err(bad("expected two orbit indices"));
    }
    let words = words.split('|').map(Word::parse_merge).collect::<Result<Vec<_>>>()?;
    Ok(Component::new(orbits, words))
}

fn scalar_from(field: Field, s: &str, path: &str) -> Result<Scalar> {
    field.parse_scalar(s).map_err(at(path))
}

pub fn gset_to_json(x: &GSet) -> serde_json::Value {
    wrap("gset", &gset_doc(x))
}

pub fn gset_from_json(text: &str) -> Result<GSet> {
    gset_from(&unwrap::<GSetDoc>("gset", text)?, "data")
}

pub fn morphism_doc(f: &Morphism) -> MorphismDoc {
    MorphismDoc {
        measure: measure_doc(f.measure()),
        source: gset_doc(f.source()),
        target: gset_doc(f.target()),
        coeffs: f.coeffs().iter().map(|(z, c)| (z.label(), c.to_string())).collect(),
    }
}

pub fn morphism_to_json(f: &Morphism) -> serde_json::Value {
    wrap("morphism", &morphism_doc(f))
}

pub fn morphism_from_doc(d: &MorphismDoc) -> Result<Morphism> {
    let measure = measure_from(&d.measure, "data.measure")?;
    let source = gset_from(&d.source, "data.source")?;
    let target = gset_from(&d.target, "data.target")?;
    let coeffs = d
        .coeffs
        .iter()
        .map(|(k, v)| {
            let path = format!("data.coeffs[{k:?}]");
            let z = parse_component(k).map_err(at(&path))?;
            z.validate(&[&target, &source]).map_err(at(&path))?;
            Ok((z, scalar_from(measure.field(), v, &path)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Morphism::from_coeffs(&measure, &source, &target, coeffs).map_err(at("data.coeffs"))
}

pub fn morphism_from_json(text: &str) -> Result<Morphism> {
    morphism_from_doc(&unwrap("morphism", text)?)
}

fn ordered_doc(o: &OrderedGSet) -> OrderedDoc {
    OrderedDoc { carrier: gset_doc(o.carrier()), less: o.less().iter().map(Component::label).collect() }
}

fn ordered_from(d: &OrderedDoc, path: &str) -> Result<OrderedGSet> {
    let carrier = gset_from(&d.carrier, &format!("{path}.carrier"))?;
    let less = d
        .less
        .iter()
        .enumerate()
        .map(|(i, s)| parse_component(s).map_err(at(&format!("{path}.less[{i}]"))))
        .collect::<Result<BTreeSet<_>>>()?;
    OrderedGSet::checked(carrier, less).map_err(at(&format!("{path}.less")))
}

pub fn ordered_to_json(o: &OrderedGSet) -> serde_json::Value {
    wrap("ordered", &ordered_doc(o))
}

pub fn ordered_from_json(text: &str) -> Result<OrderedGSet> {
    ordered_from(&unwrap("ordered", text)?, "data")
}

pub fn profile_to_json(p: &DelannicProfile) -> serde_json::Value {
    let strs = |v: &[Scalar]| v.iter().map(Scalar::to_string).collect();
    wrap(
        "profile",
        &ProfileDoc {
            kind: p.kind.to_string(),
            field: p.dim.field().name(),
            dim: p.dim.to_string(),
            gamma1: strs(&p.gamma1),
            gamma2: strs(&p.gamma2),
            convention: p.convention.to_string(),
        },
    )
}

fn parse_type(s: &str) -> Result<DelannicType> {
    Ok(match s {
        "T1" => DelannicType::T1,
        "T2" => DelannicType::T2,
        "T3" => DelannicType::T3,
        "T4" => DelannicType::T4,
        "ZERO" => DelannicType::Zero,
        "NOT_DELANNIC" => DelannicType::NotDelannic,
        _ => return Err(Error::Invalid(format!("unknown type {s:?}"))),
    })
}

pub fn profile_from_json(text: &str) -> Result<DelannicProfile> {
    let d: ProfileDoc = unwrap("profile", text)?;
    let field = Field::parse(&d.field).map_err(at("data.field"))?;
    let list = |v: &[String], name: &str| {
        v.iter()
            .enumerate()
            .map(|(i, s)| scalar_from(field, s, &format!("data.{name}[{i}]")))
            .collect::<Result<Vec<_>>>()
    };
    Ok(DelannicProfile {
        dim: scalar_from(field, &d.dim, "data.dim")?,
        gamma1: list(&d.gamma1, "gamma1")?,
        gamma2: list(&d.gamma2, "gamma2")?,
        kind: parse_type(&d.kind).map_err(at("data.type"))?,
        convention: GammaConvention::parse(&d.convention).map_err(at("data.convention"))?,
    })
}

pub fn functor_to_json(f: &TensorFunctor) -> serde_json::Value {
    let doc = FunctorDoc {
        source_type: f.source_type(),
        target: measure_doc(f.target()),
        expr: f.expr().map(OrderExpr::to_string),
        generator: f.expr().is_none().then(|| ordered_doc(f.generator())),
    };
    wrap("functor", &doc)
}

pub fn functor_from_json(text: &str) -> Result<TensorFunctor> {
    let d: FunctorDoc = unwrap("functor", text)?;
    let target = measure_from(&d.target, "data.target")?;
    match (&d.expr, &d.generator) {
        (Some(e), None) => {
            let expr = OrderExpr::parse(e).map_err(at("data.expr"))?;
            TensorFunctor::build(d.source_type, &target, &expr).map_err(at("data"))
        }
        (None, Some(g)) => {
            let gen = ordered_from(g, "data.generator")?;
            TensorFunctor::from_generator(d.source_type, &target, gen).map_err(at("data"))
        }
        _ => Err(Error::Serialization("at data: exactly one of expr and generator is required".into())),
    }
}
