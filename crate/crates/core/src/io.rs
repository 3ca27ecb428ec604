//! JSON encodings of every public value. Polynomials are written as text in
//! factored form and rationals as `"p/q"` strings.

use log::warn;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factored::FactoredRational;
use crate::geometry::{Hyperplane, MeasureZeroSet, PolyhedralRegion};
use crate::oracle::{GridReport, Mismatch};
use crate::oresato::{multi_product_string, uni_product_string, Chain, OreSatoForm};
use crate::poly::{gcd, parse_factored, parse_factored_uni, parse_poly, MultiPoly, UniPoly};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::structure::{FactorialChain, FactorialForm, Piece, PiecewiseStructure, PochSymbol, PochhammerForm};
use crate::termratio::{Seed, TermSpec};

/// Conversion to and from the documented JSON layout.
pub trait Json: Sized {
    type Raw: Serialize + for<'de> Deserialize<'de>;

    fn to_raw(&self) -> Self::Raw;
    fn from_raw(raw: Self::Raw) -> Result<Self>;

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }

    fn from_json(text: &str) -> Result<Self> {
        let raw: Self::Raw = serde_json::from_str(text).map_err(json_error)?;
        Self::from_raw(raw)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

impl<T: Json> Json for Vec<T> {
    type Raw = Vec<T::Raw>;

    fn to_raw(&self) -> Self::Raw {
        self.iter().map(Json::to_raw).collect()
    }

    fn from_raw(raw: Self::Raw) -> Result<Self> {
        raw.into_iter().map(T::from_raw).collect()
    }
}

fn rats(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(format_rat).collect()
}

fn parse_rats(xs: &[String]) -> Result<Vec<Rat>> {
    xs.iter().map(|s| parse_rat(s)).collect()
}

fn check_region(r: PolyhedralRegion, k: usize) -> Result<PolyhedralRegion> {
    if r.arity() != k {
        return Err(Error::dim(k, r.arity()));
    }
    PolyhedralRegion::new(k, r.constraints().to_vec())
}

fn check_planes(planes: Vec<Hyperplane>, k: usize) -> Result<MeasureZeroSet> {
    if let Some(h) = planes.iter().find(|h| h.arity() != k) {
        return Err(Error::dim(k, h.arity()));
    }
    Ok(MeasureZeroSet::new(planes))
}

/// Factored text with a scalar of 1.
fn parse_product(src: &str, k: usize, what: &str) -> Result<Vec<(MultiPoly, u32)>> {
    let (s, fs) = parse_factored(src, k)?;
    if !s.is_one() {
        return Err(Error::Precondition(format!("{what} must be a product of primitive factors, got {src:?}")));
    }
    Ok(fs)
}

fn parse_uni_product(src: &str, what: &str) -> Result<Vec<(UniPoly, u32)>> {
    let (s, fs) = parse_factored_uni(src)?;
    if !s.is_one() {
        return Err(Error::Precondition(format!("{what} must be a product of primitive factors, got {src:?}")));
    }
    Ok(fs)
}

#[derive(Serialize, Deserialize)]
pub struct RawGenerator {
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Deserialize)]
pub struct RawSeed {
    pub point: Vec<i64>,
    pub value: String,
}

#[derive(Serialize, Deserialize)]
pub struct RawSpec {
    pub k: usize,
    pub generators: Vec<RawGenerator>,
    #[serde(default)]
    pub exceptions: Vec<Hyperplane>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<RawSeed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_divisor_witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guards: Option<Vec<String>>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub honest: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl Json for Seed {
    type Raw = RawSeed;

    fn to_raw(&self) -> RawSeed {
        RawSeed {
            point: self.point.clone(),
            value: format_rat(&self.value),
        }
    }

    fn from_raw(raw: RawSeed) -> Result<Self> {
        Ok(Seed {
            point: raw.point,
            value: parse_rat(&raw.value)?,
        })
    }
}

impl Json for TermSpec {
    type Raw = RawSpec;

    fn to_raw(&self) -> RawSpec {
        RawSpec {
            k: self.arity(),
            generators: self
                .generators()
                .iter()
                .map(|g| RawGenerator {
                    num: g.num_string(),
                    den: g.den_string(),
                })
                .collect(),
            exceptions: self.exceptions.planes().to_vec(),
            seed: self.seed.as_ref().map(Json::to_raw),
            zero_divisor_witness: self.zero_divisor_witness.as_ref().map(|p| p.to_string()),
            guards: self
                .has_guards()
                .then(|| self.guards().iter().map(|g| g.to_string()).collect()),
            honest: self.honest,
        }
    }

    fn from_raw(raw: RawSpec) -> Result<Self> {
        let k = raw.k;
        if k == 0 {
            return Err(Error::Precondition("arity must be positive".into()));
        }
        if raw.generators.len() != k {
            return Err(Error::dim(k, raw.generators.len()));
        }
        let mut gens = Vec::with_capacity(k);
        for (i, g) in raw.generators.iter().enumerate() {
            let num = parse_poly(&g.num, k)?;
            let den = parse_poly(&g.den, k)?;
            if num.is_zero() {
                return Err(Error::ZeroPolynomial(format!("numerator of generator {}", i + 1)));
            }
            if den.is_zero() {
                return Err(Error::ZeroPolynomial(format!("denominator of generator {}", i + 1)));
            }
            if !gcd(&num, &den).is_constant() {
                warn!("generator {} is not reduced; cancelling common factors", i + 1);
            }
            gens.push(FactoredRational::parse(&g.num, &g.den, k)?);
        }
        let mut spec = TermSpec::new(k, gens)?;
        if let Some(gs) = raw.guards {
            let guards = gs.iter().map(|g| parse_poly(g, k)).collect::<Result<Vec<_>>>()?;
            spec = spec.with_guards(guards)?;
        }
        spec.exceptions = check_planes(raw.exceptions, k)?;
        if let Some(s) = raw.seed {
            let s = Seed::from_raw(s)?;
            spec = spec.with_seed(s.point, s.value)?;
        }
        if let Some(w) = raw.zero_divisor_witness {
            let p = parse_poly(&w, k)?;
            if p.is_zero() {
                return Err(Error::ZeroPolynomial("zero-divisor witness".into()));
            }
            spec.zero_divisor_witness = Some(p);
        }
        spec.honest = raw.honest;
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize)]
pub struct RawChain {
    pub v: Vec<i64>,
    pub a: String,
    pub b: String,
}

#[derive(Serialize, Deserialize)]
pub struct RawForm {
    pub k: usize,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub gamma: Vec<String>,
    pub chains: Vec<RawChain>,
}

impl Json for OreSatoForm {
    type Raw = RawForm;

    fn to_raw(&self) -> RawForm {
        RawForm {
            k: self.k,
            c: self.c_string(),
            d: self.d_string(),
            gamma: rats(&self.gamma),
            chains: self
                .chains
                .iter()
                .map(|ch| RawChain {
                    v: ch.v.clone(),
                    a: uni_product_string(&ch.a),
                    b: uni_product_string(&ch.b),
                })
                .collect(),
        }
    }

    fn from_raw(raw: RawForm) -> Result<Self> {
        let k = raw.k;
        let gamma = parse_rats(&raw.gamma)?;
        if gamma.len() != k {
            return Err(Error::dim(k, gamma.len()));
        }
        let mut chains = Vec::new();
        for ch in raw.chains {
            if ch.v.len() != k {
                return Err(Error::dim(k, ch.v.len()));
            }
            chains.push(Chain {
                v: ch.v,
                a: parse_uni_product(&ch.a, "a_v")?,
                b: parse_uni_product(&ch.b, "b_v")?,
            });
        }
        Ok(OreSatoForm {
            k,
            c: parse_product(&raw.c, k, "C")?,
            d: parse_product(&raw.d, k, "D")?,
            gamma,
            chains,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct RawPiece {
    pub region: PolyhedralRegion,
    pub z0: Vec<i64>,
    pub f0: Option<String>,
}

#[derive(Serialize, Deserialize)]
pub struct RawStructure {
    pub form: RawForm,
    #[serde(rename = "H")]
    pub h: Vec<Hyperplane>,
    pub pieces: Vec<RawPiece>,
}

impl Json for PiecewiseStructure {
    type Raw = RawStructure;

    fn to_raw(&self) -> RawStructure {
        RawStructure {
            form: self.form.to_raw(),
            h: self.h.planes().to_vec(),
            pieces: self
                .pieces
                .iter()
                .map(|p| RawPiece {
                    region: p.region.clone(),
                    z0: p.z0.clone(),
                    f0: p.f0.as_ref().map(format_rat),
                })
                .collect(),
        }
    }

    fn from_raw(raw: RawStructure) -> Result<Self> {
        let form = OreSatoForm::from_raw(raw.form)?;
        let k = form.k;
        let mut pieces = Vec::new();
        for p in raw.pieces {
            if p.z0.len() != k {
                return Err(Error::dim(k, p.z0.len()));
            }
            pieces.push(Piece {
                region: check_region(p.region, k)?,
                z0: p.z0,
                f0: p.f0.as_deref().map(parse_rat).transpose()?,
            });
        }
        Ok(PiecewiseStructure {
            form,
            h: check_planes(raw.h, k)?,
            pieces,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct RawFactorialChain {
    pub w: Vec<i64>,
    pub a: String,
    pub b: String,
    pub n: i64,
}

#[derive(Serialize, Deserialize)]
pub struct RawFactorialForm {
    pub region: PolyhedralRegion,
    pub piece: usize,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub gamma: Vec<String>,
    pub scalar: Option<String>,
    pub chains: Vec<RawFactorialChain>,
}

impl Json for FactorialForm {
    type Raw = RawFactorialForm;

    fn to_raw(&self) -> RawFactorialForm {
        RawFactorialForm {
            region: self.region.clone(),
            piece: self.piece,
            c: multi_product_string(&self.c),
            d: multi_product_string(&self.d),
            gamma: rats(&self.gamma),
            scalar: self.scalar.as_ref().map(format_rat),
            chains: self
                .chains
                .iter()
                .map(|ch| RawFactorialChain {
                    w: ch.w.clone(),
                    a: uni_product_string(&ch.a),
                    b: uni_product_string(&ch.b),
                    n: ch.n,
                })
                .collect(),
        }
    }

    fn from_raw(raw: RawFactorialForm) -> Result<Self> {
        let k = raw.region.arity();
        let gamma = parse_rats(&raw.gamma)?;
        if gamma.len() != k {
            return Err(Error::dim(k, gamma.len()));
        }
        let mut chains = Vec::new();
        for ch in raw.chains {
            if ch.w.len() != k {
                return Err(Error::dim(k, ch.w.len()));
            }
            chains.push(FactorialChain {
                w: ch.w,
                a: parse_uni_product(&ch.a, "chain numerator")?,
                b: parse_uni_product(&ch.b, "chain denominator")?,
                n: ch.n,
            });
        }
        Ok(FactorialForm {
            region: check_region(raw.region, k)?,
            piece: raw.piece,
            c: parse_product(&raw.c, k, "C")?,
            d: parse_product(&raw.d, k, "D")?,
            gamma,
            scalar: raw.scalar.as_deref().map(parse_rat).transpose()?,
            chains,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct RawPoch {
    pub m: String,
    pub v: Vec<i64>,
    pub r: i64,
}

#[derive(Serialize, Deserialize)]
pub struct RawPochhammerForm {
    pub region: PolyhedralRegion,
    pub piece: usize,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub gamma: Vec<String>,
    pub scalar: Option<String>,
    pub num: Vec<RawPoch>,
    pub den: Vec<RawPoch>,
}

fn raw_poch(xs: &[PochSymbol]) -> Vec<RawPoch> {
    xs.iter()
        .map(|s| RawPoch {
            m: format_rat(&s.m),
            v: s.v.clone(),
            r: s.r,
        })
        .collect()
}

fn parse_poch(xs: Vec<RawPoch>, k: usize) -> Result<Vec<PochSymbol>> {
    xs.into_iter()
        .map(|s| {
            if s.v.len() != k {
                return Err(Error::dim(k, s.v.len()));
            }
            Ok(PochSymbol {
                m: parse_rat(&s.m)?,
                v: s.v,
                r: s.r,
            })
        })
        .collect()
}

impl Json for PochhammerForm {
    type Raw = RawPochhammerForm;

    fn to_raw(&self) -> RawPochhammerForm {
        RawPochhammerForm {
            region: self.region.clone(),
            piece: self.piece,
            c: multi_product_string(&self.c),
            d: multi_product_string(&self.d),
            gamma: rats(&self.gamma),
            scalar: self.scalar.as_ref().map(format_rat),
            num: raw_poch(&self.num),
            den: raw_poch(&self.den),
        }
    }

    fn from_raw(raw: RawPochhammerForm) -> Result<Self> {
        let k = raw.region.arity();
        let gamma = parse_rats(&raw.gamma)?;
        if gamma.len() != k {
            return Err(Error::dim(k, gamma.len()));
        }
        Ok(PochhammerForm {
            region: check_region(raw.region, k)?,
            piece: raw.piece,
            c: parse_product(&raw.c, k, "C")?,
            d: parse_product(&raw.d, k, "D")?,
            gamma,
            scalar: raw.scalar.as_deref().map(parse_rat).transpose()?,
            num: parse_poch(raw.num, k)?,
            den: parse_poch(raw.den, k)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct RawMismatch {
    pub z: Vec<i64>,
    pub closed: String,
    pub oracle: String,
}

#[derive(Serialize, Deserialize)]
pub struct RawReport {
    pub checked: u64,
    pub equal: u64,
    #[serde(rename = "on_H")]
    pub on_h: u64,
    pub d_zero: u64,
    pub unknown: u64,
    pub blocked: u64,
    pub mismatches: Vec<RawMismatch>,
}

impl Json for GridReport {
    type Raw = RawReport;

    fn to_raw(&self) -> RawReport {
        RawReport {
            checked: self.checked,
            equal: self.equal,
            on_h: self.on_h,
            d_zero: self.d_zero,
            unknown: self.unknown,
            blocked: self.blocked,
            mismatches: self
                .mismatches
                .iter()
                .map(|m| RawMismatch {
                    z: m.z.clone(),
                    closed: format_rat(&m.closed),
                    oracle: format_rat(&m.oracle),
                })
                .collect(),
        }
    }

    fn from_raw(raw: RawReport) -> Result<Self> {
        Ok(GridReport {
            checked: raw.checked,
            equal: raw.equal,
            on_h: raw.on_h,
            d_zero: raw.d_zero,
            unknown: raw.unknown,
            blocked: raw.blocked,
            mismatches: raw
                .mismatches
                .into_iter()
                .map(|m| {
                    Ok(Mismatch {
                        z: m.z,
                        closed: parse_rat(&m.closed)?,
                        oracle: parse_rat(&m.oracle)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}
