//! JSON input documents: a version tag, a ring literal and one payload.
//!
//! Matrices are lists of rows. Module relations are lists of columns.
//! Entries are JSON integers or strings such as `"-3/2"` or big integers.
//! Complex terms and boundaries are listed from the top degree down.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::complex::BoundedComplex;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::module::{FpModule, ModuleMap};
use crate::ring::{parse_rational, BaseRing};

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn value(&self) -> Result<BigRational> {
        match self {
            Entry::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            Entry::Text(s) => parse_rational(s),
        }
    }

    fn from_value(x: &BigRational) -> Self {
        if x.denom().is_one() {
            if let Some(n) = x.numer().to_i64() {
                return Entry::Int(n);
            }
        }
        Entry::Text(x.to_string())
    }
}

pub type Rows = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    pub generators: usize,
    /// Each inner list is one relation (a column of length `generators`).
    #[serde(default)]
    pub relations: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: ModuleDoc,
    pub target: ModuleDoc,
    pub matrix: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermDoc {
    Rank(usize),
    Module(ModuleDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub lo: i64,
    pub hi: i64,
    /// Terms for degrees `hi, hi − 1, …, lo`.
    pub ranks_or_terms: Vec<TermDoc>,
    /// Boundaries `d_hi, …, d_{lo+1}`.
    #[serde(default)]
    pub boundaries: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Payload {
    Matrix(Rows),
    Module(ModuleDoc),
    Map(MapDoc),
    Complex(ComplexDoc),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Matrix(_) => "matrix",
            Payload::Module(_) => "module",
            Payload::Map(_) => "map",
            Payload::Complex(_) => "complex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub ring: String,
    #[serde(flatten)]
    pub payload: Payload,
}

fn rows_to_matrix(ring: BaseRing, rows: &Rows, shape: Option<(usize, usize)>) -> Result<ExactMatrix> {
    let (r, c) = match shape {
        Some((r, c)) if rows.is_empty() && (r == 0 || c == 0) => return Ok(ExactMatrix::zero(ring, r, c)),
        Some(s) => s,
        None => (rows.len(), rows.first().map_or(0, Vec::len)),
    };
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("matrix must be {r}x{c} and rectangular")));
    }
    let entries = rows.iter().flatten().map(|e| Entry::value(e).and_then(|x| ring.element(&x))).collect::<Result<_>>()?;
    ExactMatrix::new(ring, r, c, entries)
}

fn matrix_to_rows(m: &ExactMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).iter().map(Entry::from_value).collect()).collect()
}

fn columns_to_matrix(ring: BaseRing, g: usize, cols: &Rows) -> Result<ExactMatrix> {
    if cols.iter().any(|c| c.len() != g) {
        return Err(Error::Parse(format!("every relation needs {g} entries")));
    }
    Ok(rows_to_matrix(ring, cols, Some((cols.len(), g)))?.transpose())
}

impl ModuleDoc {
    pub fn to_module(&self, ring: BaseRing) -> Result<FpModule> {
        if let Some(lit) = &self.ring {
            let own: BaseRing = lit.parse()?;
            if own != ring {
                return Err(Error::RingMismatch(ring.to_string(), own.to_string()));
            }
        }
        FpModule::new(ring, self.generators, columns_to_matrix(ring, self.generators, &self.relations)?)
    }

    pub fn from_module(m: &FpModule) -> Self {
        ModuleDoc { ring: None, generators: m.generators(), relations: matrix_to_rows(&m.relations().transpose()) }
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut raw: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        // Bare complex literals carry the complex fields at top level.
        if let Some(obj) = raw.as_object_mut() {
            if obj.contains_key("ranks_or_terms") && !obj.contains_key("complex") {
                let mut inner = serde_json::Map::new();
                for key in ["lo", "hi", "ranks_or_terms", "boundaries"] {
                    if let Some(v) = obj.remove(key) {
                        inner.insert(key.to_string(), v);
                    }
                }
                obj.insert("complex".to_string(), serde_json::Value::Object(inner));
            }
            obj.entry("version").or_insert(serde_json::Value::from(VERSION));
        }
        let doc: Document = serde_json::from_value(raw).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.version != VERSION {
            return Err(Error::Parse(format!("unsupported document version {}", doc.version)));
        }
        doc.ring()?;
        Ok(doc)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn ring(&self) -> Result<BaseRing> {
        self.ring.parse()
    }

    fn expect(&self, want: &str) -> Error {
        Error::Parse(format!("expected a {want} document, found a {}", self.payload.kind()))
    }

    pub fn matrix(&self) -> Result<ExactMatrix> {
        match &self.payload {
            Payload::Matrix(rows) => rows_to_matrix(self.ring()?, rows, None),
            _ => Err(self.expect("matrix")),
        }
    }

    pub fn module(&self) -> Result<FpModule> {
        match &self.payload {
            Payload::Module(m) => m.to_module(self.ring()?),
            _ => Err(self.expect("module")),
        }
    }

    pub fn map(&self) -> Result<ModuleMap> {
        let Payload::Map(m) = &self.payload else { return Err(self.expect("map")) };
        let ring = self.ring()?;
        let source = m.source.to_module(ring)?;
        let target = m.target.to_module(ring)?;
        let matrix = rows_to_matrix(ring, &m.matrix, Some((target.generators(), source.generators())))?;
        ModuleMap::new(source, target, matrix)
    }

    pub fn complex(&self) -> Result<BoundedComplex> {
        let Payload::Complex(c) = &self.payload else { return Err(self.expect("complex")) };
        let ring = self.ring()?;
        if c.hi < c.lo {
            return Err(Error::Parse("complex needs lo <= hi".into()));
        }
        let n = (c.hi - c.lo + 1) as usize;
        if c.ranks_or_terms.len() != n {
            return Err(Error::Parse(format!("complex on [{}, {}] needs {n} terms", c.lo, c.hi)));
        }
        if c.boundaries.len() != n - 1 {
            return Err(Error::Parse(format!("complex on [{}, {}] needs {} boundaries", c.lo, c.hi, n - 1)));
        }
        // Reverse into ascending degree order.
        let terms = c
            .ranks_or_terms
            .iter()
            .rev()
            .map(|t| match t {
                TermDoc::Rank(r) => Ok(FpModule::free(ring, *r)),
                TermDoc::Module(m) => m.to_module(ring),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut boundaries = Vec::with_capacity(n - 1);
        for (k, rows) in c.boundaries.iter().rev().enumerate() {
            let (src, dst) = (&terms[k + 1], &terms[k]);
            let m = rows_to_matrix(ring, rows, Some((dst.generators(), src.generators())))?;
            boundaries.push(ModuleMap::new(src.clone(), dst.clone(), m)?);
        }
        BoundedComplex::new(ring, c.lo, terms, boundaries)
    }

    pub fn from_matrix(m: &ExactMatrix) -> Self {
        Document { version: VERSION, ring: m.ring().to_string(), payload: Payload::Matrix(matrix_to_rows(m)) }
    }

    pub fn from_module(m: &FpModule) -> Self {
        Document { version: VERSION, ring: m.ring().to_string(), payload: Payload::Module(ModuleDoc::from_module(m)) }
    }

    pub fn from_map(f: &ModuleMap) -> Self {
        Document {
            version: VERSION,
            ring: f.ring().to_string(),
            payload: Payload::Map(MapDoc {
                source: ModuleDoc::from_module(f.source()),
                target: ModuleDoc::from_module(f.target()),
                matrix: matrix_to_rows(f.matrix()),
            }),
        }
    }

    pub fn from_complex(c: &BoundedComplex) -> Self {
        let ranks_or_terms = c
            .degrees()
            .rev()
            .map(|i| {
                let t = c.term(i);
                if t.is_presented_free() {
                    TermDoc::Rank(t.generators())
                } else {
                    TermDoc::Module(ModuleDoc::from_module(&t))
                }
            })
            .collect();
        let boundaries = ((c.lo() + 1)..=c.hi()).rev().map(|i| matrix_to_rows(&c.boundary_matrix(i))).collect();
        Document {
            version: VERSION,
            ring: c.ring().to_string(),
            payload: Payload::Complex(ComplexDoc { lo: c.lo(), hi: c.hi(), ranks_or_terms, boundaries }),
        }
    }
}
