//! spin6: exact Fourier-coefficient kernels, local factor polynomials,
//! restriction of q-expansions, and degree-8 Spin Euler factors.
//!
//! Every subcommand is a pure function of (config, flags, input files);
//! outputs are JSON with sorted keys and exact rational strings, so repeated
//! invocations are byte-identical.  Exit codes: 0 success, 1 domain error
//! (with a machine-readable {code, message, context} payload), 2 usage error.

mod wire;

use std::collections::BTreeMap;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use spin6_core::cyclo::CycloValue;
use spin6_core::eisen::{kernel_coeff, normalization_bridge};
use spin6_core::error::Error;
use spin6_core::groupw::{embed_gsp6, j_factor_preinverted, special_element, SpecialElement};
use spin6_core::jordan::HermMatrix;
use spin6_core::local::{interior_sum_oracle, p_poly, s_poly, u_value, ValProfile};
use spin6_core::lseries::{
    evdokimov_partial, l_correction, partial_euler_product, psi_weight, spin_euler_factor,
    spin_gamma, CoeffOracle, SatakeParams,
};
use spin6_core::quat::GaussianRational;
use spin6_core::rational::{format_rat, parse_rat, rat, Rat};
use spin6_core::restrict::{restrict_expansion, MissingPolicy, SiegelIndex};
use spin6_core::verify::suite_by_name;

use wire::{cyclo_json, parse_char_spec, Config, HermWire, SymWire};

#[derive(Parser)]
#[command(name = "spin6", version, about = "Exact arithmetic for quaternionic Eisenstein kernels and Spin L-factors")]
struct Cli {
    /// JSON config file (algebra, character, level, weight, budget, T)
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form local factor polynomial P and the factor S at u = chi(l) l^{-2r}
    LocalFactor {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        ell: u64,
        /// comma-separated elementary-divisor valuations, one per rank
        #[arg(long)]
        vals: String,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "trivial")]
        char: String,
    },
    /// Brute-force interior character sum over H_j(B0)/l^m
    OracleSum {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        /// Hermitian index file {"diag": [...], "offdiag": [[...] x3]}
        #[arg(long)]
        h: String,
    },
    /// Rational Fourier-coefficient kernel at a diagonal block representative
    KernelCoeff {
        #[arg(long)]
        h: String,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "trivial")]
        char: String,
    },
    /// Restrict a q-expansion to Siegel indices
    Restrict {
        /// JSON map {hermitian-key: "p/q" | cyclo}
        #[arg(long)]
        coeffs: String,
        /// JSON list of symmetric 3x3 matrices
        #[arg(long)]
        targets: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long)]
        zero_fill: bool,
    },
    /// Degree-8 Spin Euler factor from Satake parameters
    EulerFactor {
        /// comma-separated b0,b1,b2,b3 (rationals)
        #[arg(long)]
        satake: String,
        /// value of chi at the prime (rational)
        #[arg(long, default_value = "1")]
        charq: String,
    },
    /// Partial Euler product over configured primes
    PartialL {
        /// JSON map {"q": ["b0","b1","b2","b3"]}
        #[arg(long)]
        params: String,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value = "trivial")]
        char: String,
    },
    /// Truncated Evdokimov double sum against a coefficient oracle
    Evdokimov {
        /// symmetric matrix file for T
        #[arg(long, name = "T")]
        t: String,
        /// JSON list of {"t": matrix, "a": "p/q"}
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        r: i64,
        /// lambda,det bounds
        #[arg(long)]
        bounds: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value = "trivial")]
        char: String,
    },
    /// Generalized Bernoulli number B_{n, chi}
    Bernoulli {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "trivial")]
        char: String,
    },
    /// Factor of automorphy j(g, Z) and the moved point gZ
    Jfactor {
        /// element spec: "wM:M", "iota:J", or @file with a 6x6 rational matrix
        #[arg(long)]
        element: String,
        /// Z file: {"re": hermitian, "im": hermitian}
        #[arg(long)]
        z: String,
    },
    /// Run verification suites (the acceptance checks)
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Parse and canonically re-serialize a q-expansion
    Roundtrip {
        #[arg(long)]
        expansion: String,
    },
    /// Archimedean Gamma(s, Spin) and the level correction L_M
    SpinGamma {
        #[arg(long)]
        s: i64,
        #[arg(long)]
        r: i64,
    },
    /// Psi weight at a rational point
    Psi {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        level: u64,
    },
    /// Level correction (-1)^{Omega(M)} M^{-2s} and the implicit constant det(T)^3
    LCorrection {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        s: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serialize"));
        }
        Err(e) => {
            let payload = json!({
                "code": e.code(),
                "message": e.to_string(),
                "context": format!("{e:?}"),
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serialize"));
            std::process::exit(1);
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("bad json in {path}: {e}")))
}

fn parse_csv_rationals(s: &str) -> Result<Vec<Rat>, Error> {
    s.split(',').map(|p| parse_rat(p.trim())).collect()
}

fn run(cli: &Cli) -> Result<Value, Error> {
    let cfg = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::LocalFactor { rank, ell, vals, r, char } => {
            let chi = parse_char_spec(char)?;
            let vals: Vec<u32> = vals
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::Invalid(format!("bad valuation {v}"))))
                .collect::<Result<_, _>>()?;
            let profile = ValProfile::new(*rank, *ell, vals)?;
            let p = p_poly(&profile)?;
            let s = s_poly(&profile)?;
            let u = u_value(&chi, *ell, *r);
            Ok(json!({
                "rank": rank,
                "ell": ell,
                "vals": profile.vals,
                "P": p.render("u"),
                "P_coeffs": p.coeffs.iter().map(cyclo_json).collect::<Vec<_>>(),
                "S_poly": s.render("u"),
                "u": cyclo_json(&u),
                "P_at_u": cyclo_json(&p.eval(&u)),
                "S_at_u": cyclo_json(&s.eval(&u)),
            }))
        }
        Command::OracleSum { rank, ell, m, h } => {
            let hw: HermWire = read_json(h)?;
            let hm = hw.to_matrix(&cfg.algebra)?;
            let v = interior_sum_oracle(&cfg.algebra, *rank, *ell, *m, &hm, cfg.budget)?;
            Ok(json!({ "value": format_rat(&v) }))
        }
        Command::KernelCoeff { h, r, char } => {
            let chi = parse_char_spec(char)?;
            let hw: HermWire = read_json(h)?;
            let hm = hw.to_matrix(&cfg.algebra)?;
            let k = kernel_coeff(&hm, *r, &chi)?;
            let local: Vec<Value> = k
                .local
                .iter()
                .map(|lf| {
                    json!({
                        "ell": lf.l,
                        "vals": lf.vals,
                        "poly": lf.poly.render("u"),
                        "value": cyclo_json(&lf.value),
                        "ramified": lf.ramified,
                    })
                })
                .collect();
            let bridge = if chi.is_even() {
                Some(normalization_bridge(cfg.algebra.discriminant, *r, &chi)?)
            } else {
                None
            };
            Ok(json!({
                "rank": k.rank,
                "value": cyclo_json(&k.value),
                "pi_exponent": k.normalization.pi_exponent,
                "normalizer_folded": k.normalizer_folded,
                "factors": {
                    "Linv": k.l_inverse.as_ref().map(cyclo_json),
                    "Nj_power": format_rat(&k.nj_power),
                    "vol": format_rat(&k.dual_vol),
                    "local": local,
                },
                "bridge": bridge.map(|b| json!({
                    "rational_part": cyclo_json(&b.rational_part),
                    "pi_exponent": b.pi_exponent,
                    "i_exponent": b.i_exponent,
                })),
            }))
        }
        Command::Restrict { coeffs, targets, level, zero_fill } => {
            let raw: BTreeMap<String, Value> = read_json(coeffs)?;
            let mut map: BTreeMap<String, CycloValue> = BTreeMap::new();
            for (k, v) in raw {
                map.insert(canonical_key(&k)?, parse_coeff_value(&v)?);
            }
            let target_wires: Vec<SymWire> = read_json(targets)?;
            let targets: Vec<SiegelIndex> =
                target_wires.iter().map(|w| w.to_index()).collect::<Result<_, _>>()?;
            let policy = if *zero_fill { MissingPolicy::ZeroFill } else { MissingPolicy::Strict };
            let out = restrict_expansion(&map, &targets, &cfg.algebra, *level, policy)?;
            let rendered: BTreeMap<String, Value> =
                out.expansion.iter().map(|(k, v)| (k.clone(), cyclo_json(v))).collect();
            if out.zero_filled.is_empty() {
                Ok(json!(rendered))
            } else {
                Ok(json!({ "expansion": rendered, "zero_filled": out.zero_filled }))
            }
        }
        Command::EulerFactor { satake, charq } => {
            let b = parse_csv_rationals(satake)?;
            if b.len() != 4 {
                return Err(Error::Invalid("satake must have four components".into()));
            }
            let p = SatakeParams::rational([b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()])?;
            let chi_q = CycloValue::from_rat(parse_rat(charq)?);
            let coeffs = spin_euler_factor(&p, &chi_q)?;
            Ok(json!({
                "degree": 8,
                "coeffs": coeffs.iter().map(cyclo_json).collect::<Vec<_>>(),
            }))
        }
        Command::PartialL { params, s, bound, level, char } => {
            let chi = parse_char_spec(char)?;
            let raw: BTreeMap<String, [String; 4]> = read_json(params)?;
            let mut map = BTreeMap::new();
            for (q, b) in raw {
                let q: u64 = q.parse().map_err(|_| Error::Invalid(format!("bad prime {q}")))?;
                let b: Vec<Rat> = b.iter().map(|x| parse_rat(x)).collect::<Result<_, _>>()?;
                map.insert(
                    q,
                    SatakeParams::rational([b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()])?,
                );
            }
            let v = partial_euler_product(&map, &chi, *s, *bound, *level)?;
            Ok(json!({ "value": cyclo_json(&v) }))
        }
        Command::Evdokimov { t, coeffs, s, r, bounds, level, char } => {
            let chi = parse_char_spec(char)?;
            let tw: SymWire = read_json(t)?;
            let t = tw.to_index()?;
            #[derive(serde::Deserialize)]
            struct Entry {
                t: SymWire,
                a: String,
            }
            let entries: Vec<Entry> = read_json(coeffs)?;
            let mut oracle = CoeffOracle::default();
            for e in entries {
                oracle.entries.insert(e.t.to_index()?.key(), parse_rat(&e.a)?);
            }
            let parts: Vec<&str> = bounds.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Invalid("bounds must be lambda,det".into()));
            }
            let lb: u64 =
                parts[0].trim().parse().map_err(|_| Error::Invalid("bad lambda bound".into()))?;
            let db: u64 =
                parts[1].trim().parse().map_err(|_| Error::Invalid("bad det bound".into()))?;
            let v = evdokimov_partial(&t, &oracle, &chi, *s, *r, lb, db, *level)?;
            Ok(json!({ "value": cyclo_json(&v) }))
        }
        Command::Bernoulli { n, char } => {
            let chi = parse_char_spec(char)?;
            let v = spin6_core::dirichlet::gen_bernoulli(&chi, *n);
            Ok(json!({ "value": cyclo_json(&v) }))
        }
        Command::Jfactor { element, z } => {
            let g = parse_element(&cfg, element)?;
            #[derive(serde::Deserialize)]
            struct ZWire {
                re: HermWire,
                im: HermWire,
            }
            let zw: ZWire = read_json(z)?;
            let x = zw.re.to_matrix(&cfg.algebra)?;
            let y = zw.im.to_matrix(&cfg.algebra)?;
            let zg = gauss_herm(&x, &y);
            let ginv = g.inverse()?;
            let (j, gz) = j_factor_preinverted(&ginv, &zg)?;
            Ok(json!({
                "j": { "re": format_rat(&j.re), "im": format_rat(&j.im) },
                "gz": {
                    "re": HermWire::from_matrix(&herm_part(&gz, true)),
                    "im": HermWire::from_matrix(&herm_part(&gz, false)),
                },
                "nu": format_rat(&g.nu),
            }))
        }
        Command::Verify { suite } => {
            let results = suite_by_name(suite, cfg.budget)?;
            let mut passed = 0u64;
            let mut failed = 0u64;
            let mut lines = Vec::new();
            for r in &results {
                passed += r.passed;
                failed += r.failed;
                lines.push(json!({
                    "name": r.name,
                    "passed": r.passed,
                    "failed": r.failed,
                    "details": r.details,
                }));
            }
            let out = json!({ "suites": lines, "passed": passed, "failed": failed });
            if failed > 0 {
                println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
                std::process::exit(1);
            }
            Ok(out)
        }
        Command::Roundtrip { expansion } => {
            let raw: BTreeMap<String, Value> = read_json(expansion)?;
            let mut out: BTreeMap<String, Value> = BTreeMap::new();
            for (k, v) in raw {
                out.insert(canonical_key(&k)?, cyclo_json(&parse_coeff_value(&v)?));
            }
            Ok(json!(out))
        }
        Command::SpinGamma { s, r } => {
            let g = spin_gamma(*s, *r)?;
            Ok(json!({
                "rational_part": cyclo_json(&g.rational_part),
                "pi_exponent": g.pi_exponent,
                "i_exponent": g.i_exponent,
            }))
        }
        Command::Psi { lambda, level } => {
            let v = psi_weight(&parse_rat(lambda)?, *level);
            Ok(json!({ "value": format_rat(&v) }))
        }
        Command::LCorrection { level, s } => {
            let v = l_correction(*level, *s)?;
            Ok(json!({
                "value": format_rat(&v),
                "implicit_constant": format_rat(&spin6_core::lseries::implicit_constant(
                    cfg.algebra.discriminant
                )),
            }))
        }
    }
}

/// Canonicalize an expansion key: parse the comma-separated rationals and
/// re-render them reduced.
fn canonical_key(k: &str) -> Result<String, Error> {
    let parts: Vec<String> = k
        .split(',')
        .map(|p| parse_rat(p).map(|r| format_rat(&r)))
        .collect::<Result<_, _>>()?;
    Ok(parts.join(","))
}

fn parse_coeff_value(v: &Value) -> Result<CycloValue, Error> {
    match v {
        Value::String(s) => Ok(CycloValue::from_rat(parse_rat(s)?)),
        other => serde_json::from_value(other.clone())
            .map_err(|e| Error::Invalid(format!("bad coefficient: {e}"))),
    }
}

fn parse_element(cfg: &Config, spec: &str) -> Result<spin6_core::groupw::GElement, Error> {
    if let Some(m) = spec.strip_prefix("wM:") {
        let m: u64 = m.parse().map_err(|_| Error::Invalid(format!("bad level {m}")))?;
        return special_element(&cfg.algebra, SpecialElement::AtkinLehner(m));
    }
    if let Some(j) = spec.strip_prefix("iota:") {
        let j: u8 = j.parse().map_err(|_| Error::Invalid(format!("bad index {j}")))?;
        let which = match j {
            0 => SpecialElement::Iota0,
            1 => SpecialElement::Iota1,
            2 => SpecialElement::Iota2,
            3 => SpecialElement::Iota3,
            _ => return Err(Error::Invalid("iota index must be 0..3".into())),
        };
        return special_element(&cfg.algebra, which);
    }
    if let Some(path) = spec.strip_prefix('@') {
        let rows: Vec<Vec<String>> = read_json(path)?;
        if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
            return Err(Error::Invalid("element file must be a 6x6 matrix".into()));
        }
        let mat: [Vec<Rat>; 6] = std::array::from_fn(|i| {
            rows[i].iter().map(|x| parse_rat(x).unwrap_or_else(|_| rat(0))).collect()
        });
        return embed_gsp6(&cfg.algebra, &mat);
    }
    Err(Error::Invalid(format!(
        "unknown element spec {spec:?}; use wM:M, iota:J, or @matrix.json"
    )))
}

fn gauss_herm(x: &HermMatrix<Rat>, y: &HermMatrix<Rat>) -> HermMatrix<GaussianRational> {
    HermMatrix {
        diag: std::array::from_fn(|i| GaussianRational::new(x.diag[i].clone(), y.diag[i].clone())),
        off: std::array::from_fn(|i| {
            spin6_core::quat::QuatElement::new(
                x.alg(),
                std::array::from_fn(|t| {
                    GaussianRational::new(x.off[i].coords[t].clone(), y.off[i].coords[t].clone())
                }),
            )
        }),
    }
}

fn herm_part(z: &HermMatrix<GaussianRational>, re: bool) -> HermMatrix<Rat> {
    let pick = |g: &GaussianRational| if re { g.re.clone() } else { g.im.clone() };
    HermMatrix {
        diag: std::array::from_fn(|i| pick(&z.diag[i])),
        off: std::array::from_fn(|i| {
            spin6_core::quat::QuatElement::new(
                z.alg(),
                std::array::from_fn(|t| pick(&z.off[i].coords[t])),
            )
        }),
    }
}

