//! JSON wire formats.  All numbers are exact strings ("p/q"); maps are keyed
//! by canonical strings so serialization is deterministic (serde_json orders
//! object keys).

use serde::{Deserialize, Serialize};

use spin6_core::cyclo::CycloValue;
use spin6_core::dirichlet::DirichletChar;
use spin6_core::error::Error;
use spin6_core::jordan::HermMatrix;
use spin6_core::quat::{hamilton, QuatAlgebra, QuatAlgebraData, QuatElement};
use spin6_core::rational::{format_rat, parse_rat, Rat};
use spin6_core::restrict::SiegelIndex;

/// {"diag": ["c1","c2","c3"], "offdiag": [[4 rationals] x3]} with the
/// off-diagonal quaternions in order-basis coordinates.
#[derive(Serialize, Deserialize)]
pub struct HermWire {
    pub diag: [String; 3],
    pub offdiag: [[String; 4]; 3],
}

impl HermWire {
    pub fn from_matrix(h: &HermMatrix<Rat>) -> Self {
        HermWire {
            diag: std::array::from_fn(|i| format_rat(&h.diag[i])),
            offdiag: std::array::from_fn(|s| {
                let oc = h.off[s].order_coords();
                std::array::from_fn(|t| format_rat(&oc[t]))
            }),
        }
    }

    pub fn to_matrix(&self, alg: &QuatAlgebra) -> Result<HermMatrix<Rat>, Error> {
        let diag: [Rat; 3] = [
            parse_rat(&self.diag[0])?,
            parse_rat(&self.diag[1])?,
            parse_rat(&self.diag[2])?,
        ];
        let mut off: Vec<QuatElement<Rat>> = Vec::with_capacity(3);
        for s in 0..3 {
            let coords: [Rat; 4] = [
                parse_rat(&self.offdiag[s][0])?,
                parse_rat(&self.offdiag[s][1])?,
                parse_rat(&self.offdiag[s][2])?,
                parse_rat(&self.offdiag[s][3])?,
            ];
            off.push(QuatElement::from_order_coords(alg, &coords));
        }
        Ok(HermMatrix::new(diag, [off[0].clone(), off[1].clone(), off[2].clone()]))
    }
}

/// Symmetric 3x3 matrix as rows of rational strings.
#[derive(Serialize, Deserialize)]
pub struct SymWire(pub [[String; 3]; 3]);

impl SymWire {
    pub fn to_index(&self) -> Result<SiegelIndex, Error> {
        let mut entries: [[Rat; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Rat::from_integer(0.into())));
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = parse_rat(&self.0[i][j])?;
            }
        }
        SiegelIndex::new(entries)
    }

}

/// Algebra config block: {"a": "-1", "b": "-1", "order_basis": [[...] x4]}.
#[derive(Serialize, Deserialize)]
pub struct AlgebraWire {
    pub a: String,
    pub b: String,
    /// declared discriminant, validated against the order
    #[serde(rename = "D_B", skip_serializing_if = "Option::is_none")]
    pub d_b: Option<u64>,
    pub order_basis: [[String; 4]; 4],
}

impl AlgebraWire {
    pub fn to_algebra(&self) -> Result<QuatAlgebra, Error> {
        let a = parse_rat(&self.a)?;
        let b = parse_rat(&self.b)?;
        let mut basis: [[Rat; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| Rat::from_integer(0.into())));
        for r in 0..4 {
            for c in 0..4 {
                basis[r][c] = parse_rat(&self.order_basis[r][c])?;
            }
        }
        let alg = QuatAlgebraData::new(a, b, basis)?;
        if let Some(d) = self.d_b {
            if d != alg.discriminant {
                return Err(Error::Invalid(format!(
                    "declared D_B = {d} but the order has discriminant {}",
                    alg.discriminant
                )));
            }
        }
        Ok(alg)
    }
}

/// Top-level config file.
#[derive(Serialize, Deserialize, Default)]
pub struct ConfigWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "T")]
    pub t_matrix: Option<SymWire>,
}

pub struct Config {
    pub algebra: QuatAlgebra,
    pub character: DirichletChar,
    pub level: u64,
    pub weight: u32,
    pub budget: u128,
    pub t_matrix: Option<SiegelIndex>,
}

impl Config {
    pub fn default_config() -> Self {
        Config {
            algebra: hamilton(),
            character: DirichletChar::trivial(1),
            level: 1,
            weight: 6,
            budget: 1 << 32,
            t_matrix: None,
        }
    }

    pub fn load(path: Option<&str>) -> Result<Self, Error> {
        let mut cfg = Self::default_config();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Invalid(format!("cannot read config {p}: {e}")))?;
            let wire: ConfigWire = serde_json::from_str(&text)
                .map_err(|e| Error::Invalid(format!("bad config: {e}")))?;
            if let Some(a) = wire.algebra {
                cfg.algebra = a.to_algebra()?;
            }
            if let Some(c) = wire.character {
                cfg.character = parse_char_value(&c)?;
            }
            if let Some(l) = wire.level {
                cfg.level = l;
            }
            if let Some(w) = wire.weight {
                cfg.weight = w;
            }
            if let Some(b) = wire.budget {
                cfg.budget = b;
            }
            if let Some(t) = wire.t_matrix {
                cfg.t_matrix = Some(t.to_index()?);
            }
        }
        if let Ok(v) = std::env::var("SPIN6_BUDGET") {
            cfg.budget = v
                .parse()
                .map_err(|_| Error::Invalid("SPIN6_BUDGET must be an integer".into()))?;
        }
        Ok(cfg)
    }
}

/// Character spec: "trivial", "trivial:M", "mod4", "mod5-order4",
/// "mod5-quadratic", or "@path" to a JSON {"modulus","order","images"}.
pub fn parse_char_spec(spec: &str) -> Result<DirichletChar, Error> {
    let chi = match spec {
        "trivial" => DirichletChar::trivial(1),
        "mod4" => DirichletChar::nontrivial_mod4(),
        "mod5-order4" => DirichletChar::mod5_order4(),
        "mod5-quadratic" => DirichletChar::mod5_quadratic(),
        _ => {
            if let Some(m) = spec.strip_prefix("trivial:") {
                DirichletChar::trivial(
                    m.parse().map_err(|_| Error::Invalid(format!("bad modulus {m}")))?,
                )
            } else if let Some(path) = spec.strip_prefix('@') {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Invalid(format!("bad character json: {e}")))?
            } else {
                return Err(Error::Invalid(format!(
                    "unknown character spec {spec:?}; use trivial, trivial:M, mod4, mod5-order4, mod5-quadratic, or @file.json"
                )));
            }
        }
    };
    chi.validate()?;
    Ok(chi)
}

fn parse_char_value(v: &serde_json::Value) -> Result<DirichletChar, Error> {
    if let Some(s) = v.as_str() {
        return parse_char_spec(s);
    }
    serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("bad character: {e}")))
}

/// Canonical rendering of a cyclotomic value for output payloads: plain
/// rational string when rational, else the {n, coeffs} object.
pub fn cyclo_json(v: &CycloValue) -> serde_json::Value {
    match v.rational_part() {
        Some(r) => serde_json::Value::String(format_rat(&r)),
        None => serde_json::to_value(v).expect("cyclo serializes"),
    }
}
