//! Wire formats. Complex numbers are `[re, im]` pairs everywhere.

use serde::Deserialize;
use serde_json::{json, Map, Value};
use ttocheck_core::blaschke::NormalizationMode;
use ttocheck_core::operators::Space;
use ttocheck_core::{BasisTag, CMatrix, Error, FiniteBlaschke, OperatorMatrix, SymbolSpec, UnitDiskPoint, C64};

/// Errors raised while decoding input documents.
#[derive(Debug)]
pub enum InputError {
    Json(serde_json::Error),
    Io(std::io::Error),
    Invalid(String),
    Core(Error),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Json(e) => write!(f, "malformed JSON: {e}"),
            InputError::Io(e) => write!(f, "cannot read input: {e}"),
            InputError::Invalid(m) => write!(f, "{m}"),
            InputError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Json(_) => "malformed_json",
            InputError::Io(_) => "io",
            InputError::Invalid(_) => "invalid_input",
            InputError::Core(_) => "invalid_instance",
        }
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Json(e)
    }
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Core(e)
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, InputError>;

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn to_c64(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeDoc {
    pub zeros: Vec<[f64; 2]>,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub mode: Option<String>,
}

impl BlaschkeDoc {
    pub fn build(&self) -> Result<FiniteBlaschke> {
        let zeros: Vec<C64> = self.zeros.iter().copied().map(to_c64).collect();
        let mode = match self.mode.as_deref() {
            None | Some("plain") => NormalizationMode::Plain,
            Some("normalized") => NormalizationMode::Normalized,
            Some(other) => return Err(InputError::Invalid(format!("unknown mode {other:?}"))),
        };
        if !self.gamma.is_finite() {
            return Err(InputError::Invalid("gamma must be finite".into()));
        }
        Ok(FiniteBlaschke::from_values(&zeros)?.with_gamma(self.gamma).with_mode(mode))
    }
}

pub fn blaschke(b: &FiniteBlaschke) -> Value {
    let mode = match b.mode() {
        NormalizationMode::Plain => "plain",
        NormalizationMode::Normalized => "normalized",
    };
    json!({
        "zeros": complex_list(&b.zero_values()),
        "gamma": b.gamma(),
        "mode": mode,
    })
}

pub fn parse_basis_tag(s: &str) -> Result<BasisTag> {
    match s {
        "kernel" => Ok(BasisTag::Kernel),
        "monomial" => Ok(BasisTag::Monomial),
        "example3" => Ok(BasisTag::Example3),
        other => Err(InputError::Invalid(format!("unknown basis {other:?}"))),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub blaschke: BlaschkeDoc,
    pub basis: String,
}

impl BasisDoc {
    pub fn build(&self) -> Result<Space> {
        Ok(Space::from_parts(&self.blaschke.build()?, parse_basis_tag(&self.basis)?)?)
    }
}

pub fn basis(space: &Space) -> Value {
    json!({
        "blaschke": blaschke(&space.blaschke()),
        "basis": space.tag().as_str(),
    })
}

/// Unknown top-level fields (`kind`, `verdict` from `generate`) are ignored.
#[derive(Debug, Clone, Deserialize)]
pub struct OperatorDoc {
    pub basis: BasisDoc,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl OperatorDoc {
    pub fn build(&self) -> Result<OperatorMatrix> {
        let space = self.basis.build()?;
        let n = self.entries.len();
        if self.entries.iter().any(|row| row.len() != n) {
            return Err(InputError::Invalid("entries must form a square matrix".into()));
        }
        let m = CMatrix::from_fn(n, n, |i, j| to_c64(self.entries[i][j]));
        Ok(OperatorMatrix::new(m, space)?)
    }
}

pub fn operator(m: &OperatorMatrix) -> Value {
    json!({
        "basis": basis(m.space()),
        "entries": matrix(m.entries()),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    #[serde(default)]
    pub psi: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub chi: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub psi_values: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub chi_values: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub trig: Option<Map<String, Value>>,
    #[serde(default)]
    pub example3: Option<[[f64; 2]; 5]>,
}

fn list(v: &Option<Vec<[f64; 2]>>) -> Vec<C64> {
    v.as_ref().map(|l| l.iter().copied().map(to_c64).collect()).unwrap_or_default()
}

impl SymbolDoc {
    /// Decode against a space of dimension `n` (trig keys run over
    /// `−(n−1)..=n−1`; missing keys are zero).
    pub fn build(&self, n: usize) -> Result<SymbolSpec> {
        let kinds = [
            self.psi.is_some() || self.chi.is_some(),
            self.psi_values.is_some() || self.chi_values.is_some(),
            self.trig.is_some(),
            self.example3.is_some(),
        ];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(InputError::Invalid(
                "symbol needs exactly one of psi/chi, psi_values/chi_values, trig, example3".into(),
            ));
        }
        let pad = |mut v: Vec<C64>| {
            if v.is_empty() {
                v = vec![C64::new(0.0, 0.0); n];
            }
            v
        };
        if kinds[0] {
            return Ok(SymbolSpec::Kernel { psi: pad(list(&self.psi)), chi: pad(list(&self.chi)) });
        }
        if kinds[1] {
            return Ok(SymbolSpec::KernelValues {
                psi: pad(list(&self.psi_values)),
                chi: pad(list(&self.chi_values)),
            });
        }
        if let Some(map) = &self.trig {
            let mut c = vec![C64::new(0.0, 0.0); 2 * n - 1];
            for (key, value) in map {
                let k: isize = key
                    .parse()
                    .map_err(|_| InputError::Invalid(format!("trig key {key:?} is not an integer")))?;
                let idx = k + n as isize - 1;
                if idx < 0 || idx >= c.len() as isize {
                    return Err(InputError::Invalid(format!("trig key {k} outside ±{}", n - 1)));
                }
                let p: [f64; 2] = serde_json::from_value(value.clone())?;
                c[idx as usize] = to_c64(p);
            }
            return Ok(SymbolSpec::Trig(c));
        }
        let e = self.example3.expect("checked above");
        Ok(SymbolSpec::Example3(e.map(to_c64)))
    }
}

pub fn symbol(s: &SymbolSpec) -> Value {
    match s {
        SymbolSpec::Kernel { psi, chi } => json!({"psi": complex_list(psi), "chi": complex_list(chi)}),
        SymbolSpec::KernelValues { psi, chi } => {
            json!({"psi_values": complex_list(psi), "chi_values": complex_list(chi)})
        }
        SymbolSpec::Trig(c) => {
            let n = c.len().div_ceil(2);
            let map: Map<String, Value> = c
                .iter()
                .enumerate()
                .map(|(i, &z)| ((i as isize - (n as isize - 1)).to_string(), complex(z)))
                .collect();
            json!({ "trig": map })
        }
        SymbolSpec::Example3(c) => json!({ "example3": complex_list(c) }),
    }
}

/// Parse a `re,im` or `re` command-line value as a disk point.
pub fn parse_point(s: &str) -> Result<UnitDiskPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| InputError::Invalid(format!("bad number {t:?}")));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(InputError::Invalid(format!("expected re,im but got {s:?}"))),
    };
    Ok(UnitDiskPoint::new(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_symbol_round_trips() {
        let s = SymbolSpec::Trig(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-3.0, 0.5)]);
        let doc: SymbolDoc = serde_json::from_value(symbol(&s)).unwrap();
        assert_eq!(doc.build(2).unwrap(), s);
        let missing: SymbolDoc = serde_json::from_str(r#"{"trig": {"1": [4, 0]}}"#).unwrap();
        let zero = C64::new(0.0, 0.0);
        assert_eq!(missing.build(2).unwrap(), SymbolSpec::Trig(vec![zero, zero, C64::new(4.0, 0.0)]));
        let outside: SymbolDoc = serde_json::from_str(r#"{"trig": {"2": [1, 0]}}"#).unwrap();
        assert!(outside.build(2).is_err());
    }

    #[test]
    fn points_and_modes() {
        assert_eq!(parse_point("0.3,0.2").unwrap().value(), C64::new(0.3, 0.2));
        assert_eq!(parse_point("0.5").unwrap().value(), C64::new(0.5, 0.0));
        assert!(parse_point("1.5").is_err() && parse_point("a,b").is_err());
        let b: BlaschkeDoc = serde_json::from_str(r#"{"zeros": [[0.5, 0]], "mode": "sideways"}"#).unwrap();
        assert!(b.build().is_err());
        let b: BlaschkeDoc = serde_json::from_str(r#"{"zeros": [[0.5, 0]], "mode": "normalized"}"#).unwrap();
        assert_eq!(blaschke(&b.build().unwrap())["mode"], "normalized");
    }
}
