//! The `fgl` command line: argument model, dispatch and output rendering.
//!
//! Exit codes: 0 success, 1 a verification found a mismatch or violation,
//! 2 invalid parameters, 3 a resource guard refused the computation.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::chern::{relation_set_with_limits, ChernLimits, DEFAULT_MAX_CHERN_TERMS};
use crate::engine::{
    coefficient_table, p_series, verify_degree_bound, vs_regrade, EngineLimits, FglParams,
    FglTower, TruncatedFgl, DEFAULT_MAX_Y_CAP,
};
use crate::error::FglError;
use crate::oracle::{compare, default_degree, oracle_fgl, CompareReport, OracleFgl};
use crate::ring::{PolyJson, PrimeField};
use crate::witt::{witt_family_with_limit, witt_mod_p, DEFAULT_MAX_WITT_DEGREE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Name of the environment variable that overrides every resource guard.
pub const MAX_TERMS_ENV: &str = "FGL_MAX_TERMS";

#[derive(Debug, Parser)]
#[command(
    name = "fgl",
    version,
    about = "Mod-p Honda formal group law of Morava K-theory K(s)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integral Witt symmetric polynomials w_0 … w_jmax.
    Witt(WittArgs),
    /// F(x, y) modulo y^(q^N) by the substitution ladder.
    Compute(ComputeArgs),
    /// [p^k](x) from the level-N truncation.
    Pseries(PseriesArgs),
    /// F(x, y) from the Honda logarithm modulo total degree D.
    Oracle(OracleArgs),
    /// Compare the ladder against the logarithm oracle; exit 1 on mismatch.
    Verify(VerifyArgs),
    /// Chern class relations over F_p[u]/u^(p^(ks)).
    Chern(ChernArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FormatArgs {
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    #[arg(long)]
    pub text: bool,
}

impl FormatArgs {
    fn json(&self) -> bool {
        self.json
    }
}

#[derive(Debug, Args)]
pub struct WittArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub jmax: usize,
    /// Reduce coefficients into F_p.
    #[arg(long)]
    pub mod_p: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub level: u32,
    #[command(flatten)]
    pub format: FormatArgs,
    /// Also print A_l(x) with F = Σ A_l(x) y^l.
    #[arg(long)]
    pub coeff_table: bool,
    /// Check α_ij = 0 for i > (pq)^m whenever j < q^m; exit 1 on violation.
    #[arg(long)]
    pub verify_degree_bound: bool,
    /// Print the v_s exponent (i + j - 1)/(p^s - 1) of every term.
    #[arg(long)]
    pub regrade: bool,
}

#[derive(Debug, Args)]
pub struct PseriesArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub level: u32,
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    /// Exclusive total-degree bound D.
    #[arg(long)]
    pub degree: u64,
    #[arg(long)]
    pub check_associativity: bool,
    #[arg(long)]
    pub check_pseries: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub level: u32,
    /// Exclusive total-degree bound D; defaults to max(p^s + 1, q^N).
    #[arg(long)]
    pub degree: Option<u64>,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct ChernArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub format: FormatArgs,
}

/// Resource guards in effect for one invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub max_y_cap: u64,
    pub max_witt_degree: u64,
    pub max_chern_terms: u128,
    pub max_oracle_degree: u64,
}

/// Largest total-degree bound accepted by `oracle` and `verify`.
pub const DEFAULT_MAX_ORACLE_DEGREE: u64 = 256;

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_y_cap: DEFAULT_MAX_Y_CAP,
            max_witt_degree: DEFAULT_MAX_WITT_DEGREE,
            max_chern_terms: DEFAULT_MAX_CHERN_TERMS,
            max_oracle_degree: DEFAULT_MAX_ORACLE_DEGREE,
        }
    }
}

impl Guards {
    /// Defaults, with every limit replaced by `FGL_MAX_TERMS` when it is set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(MAX_TERMS_ENV) {
            Ok(v) => {
                let n: u64 = v.trim().parse().map_err(|_| {
                    format!("{MAX_TERMS_ENV} must be a non-negative integer, got {v:?}")
                })?;
                Ok(Guards::uniform(n))
            }
            Err(_) => Ok(Guards::default()),
        }
    }

    pub fn uniform(n: u64) -> Self {
        Guards {
            max_y_cap: n,
            max_witt_degree: n,
            max_chern_terms: n as u128,
            max_oracle_degree: n,
        }
    }

    fn engine(&self) -> EngineLimits {
        EngineLimits {
            max_y_cap: self.max_y_cap,
            max_witt_degree: self.max_witt_degree,
        }
    }
}

/// What one invocation printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_status(stdout: String, passed: bool) -> Self {
        Outcome {
            code: if passed {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILED
            },
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: FglError) -> Self {
        let code = match e {
            FglError::InvalidParameter(_) => EXIT_INVALID,
            FglError::Resource { .. } => EXIT_RESOURCE,
            _ => EXIT_VERIFICATION_FAILED,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run(cli: &Cli, guards: Guards) -> Outcome {
    let result = match &cli.command {
        Command::Witt(a) => run_witt(a, guards),
        Command::Compute(a) => run_compute(a, guards),
        Command::Pseries(a) => run_pseries(a, guards),
        Command::Oracle(a) => run_oracle(a, guards),
        Command::Verify(a) => run_verify(a, guards),
        Command::Chern(a) => run_chern(a, guards),
    };
    result.unwrap_or_else(Outcome::error)
}

fn invalid(msg: impl Into<String>) -> FglError {
    FglError::InvalidParameter(msg.into())
}

fn recursion_params(p: u64, s: u32) -> Result<FglParams, FglError> {
    FglParams::new(p, s)
}

fn check_level(params: FglParams, level: u32, guards: Guards) -> Result<(), FglError> {
    if level == 0 {
        return Err(invalid("--level must be at least 1"));
    }
    let projected = (params.q() as u128).checked_pow(level).unwrap_or(u128::MAX);
    if level > 1 && projected > guards.max_y_cap as u128 {
        return Err(FglError::Resource {
            what: format!("level {level} (y-cap q^{level})"),
            projected,
            limit: guards.max_y_cap as u128,
        });
    }
    Ok(())
}

fn check_degree(degree: u64, guards: Guards) -> Result<(), FglError> {
    if degree < 2 {
        return Err(invalid("--degree must be at least 2"));
    }
    if degree > guards.max_oracle_degree {
        return Err(FglError::Resource {
            what: "oracle total-degree bound".into(),
            projected: degree as u128,
            limit: guards.max_oracle_degree as u128,
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct Header {
    p: u64,
    s: u32,
    q: u64,
    level: u32,
    y_cap: u64,
}

impl Header {
    fn of(f: &TruncatedFgl) -> Self {
        let params = f.params();
        Header {
            p: params.p(),
            s: params.s(),
            q: params.q(),
            level: f.level(),
            y_cap: f.y_cap(),
        }
    }

    fn text(&self) -> String {
        format!(
            "# p={} s={} q={} level={} y_cap={}\n",
            self.p, self.s, self.q, self.level, self.y_cap
        )
    }
}

fn to_json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("output documents are serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct WittDoc {
    p: u64,
    jmax: usize,
    mod_p: bool,
    certified: bool,
    polys: Vec<IndexedPoly>,
}

#[derive(Serialize)]
struct IndexedPoly {
    j: usize,
    poly: PolyJson,
}

fn run_witt(a: &WittArgs, guards: Guards) -> Result<Outcome, FglError> {
    PrimeField::new(a.p)?;
    let family = witt_family_with_limit(a.p, a.jmax, guards.max_witt_degree)?;
    let certified = family.certify().is_ok();
    let (texts, jsons): (Vec<String>, Vec<PolyJson>) = if a.mod_p {
        witt_mod_p(&family)
            .iter()
            .map(|w| (w.to_text(), w.to_json_value()))
            .unzip()
    } else {
        family
            .polys()
            .iter()
            .map(|w| (w.to_text(), w.to_json_value()))
            .unzip()
    };
    let out = if a.format.json() {
        to_json_line(&WittDoc {
            p: a.p,
            jmax: a.jmax,
            mod_p: a.mod_p,
            certified,
            polys: jsons
                .into_iter()
                .enumerate()
                .map(|(j, poly)| IndexedPoly { j, poly })
                .collect(),
        })
    } else {
        let mut s = format!(
            "# p={} jmax={} domain={} certified={}\n",
            a.p,
            a.jmax,
            if a.mod_p {
                format!("F_{}", a.p)
            } else {
                "Z".into()
            },
            certified
        );
        for (j, t) in texts.iter().enumerate() {
            let _ = writeln!(s, "w_{j} = {t}");
        }
        s
    };
    Ok(Outcome::with_status(out, certified))
}

#[derive(Serialize)]
struct CoeffRow {
    l: usize,
    poly: PolyJson,
}

#[derive(Serialize)]
struct BandJson {
    m: u32,
    y_cap: u64,
    bound: String,
    max_x_exponent: Option<u32>,
}

#[derive(Serialize)]
struct ViolationJson {
    i: u32,
    j: u32,
    m: u32,
}

#[derive(Serialize)]
struct DegreeBoundJson {
    passed: bool,
    violations: Vec<ViolationJson>,
    bands: Vec<BandJson>,
}

#[derive(Serialize)]
struct RegradeJson {
    i: u32,
    j: u32,
    e: u64,
}

#[derive(Serialize)]
struct ComputeDoc {
    header: Header,
    poly: PolyJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeff_table: Option<Vec<CoeffRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree_bound: Option<DegreeBoundJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regrade: Option<Vec<RegradeJson>>,
}

fn run_compute(a: &ComputeArgs, guards: Guards) -> Result<Outcome, FglError> {
    let params = recursion_params(a.p, a.s)?;
    check_level(params, a.level, guards)?;
    let mut tower = FglTower::with_limits(params, guards.engine())?;
    let f = tower.extend_to(a.level)?.clone();
    let header = Header::of(&f);

    let table = a.coeff_table.then(|| coefficient_table(&f));
    let report = a.verify_degree_bound.then(|| verify_degree_bound(&f));
    let grading = if a.regrade {
        Some(vs_regrade(&f)?)
    } else {
        None
    };
    let passed = report.as_ref().is_none_or(|r| r.passed());

    let out = if a.format.json() {
        to_json_line(&ComputeDoc {
            header,
            poly: f.poly().to_json_value(),
            coeff_table: table.map(|t| {
                t.iter()
                    .enumerate()
                    .map(|(l, a)| CoeffRow {
                        l,
                        poly: a.to_json_value(),
                    })
                    .collect()
            }),
            degree_bound: report.map(|r| DegreeBoundJson {
                passed: r.passed(),
                violations: r
                    .violations
                    .iter()
                    .map(|v| ViolationJson {
                        i: v.i,
                        j: v.j,
                        m: v.m,
                    })
                    .collect(),
                bands: r
                    .bands
                    .iter()
                    .map(|b| BandJson {
                        m: b.m,
                        y_cap: b.y_cap,
                        bound: b.bound.to_string(),
                        max_x_exponent: b.max_x_exponent,
                    })
                    .collect(),
            }),
            regrade: grading.map(|g| {
                g.iter()
                    .map(|(&(i, j), &e)| RegradeJson { i, j, e })
                    .collect()
            }),
        })
    } else {
        let mut s = header.text();
        s.push_str(&f.poly().to_text());
        s.push('\n');
        if let Some(t) = table {
            s.push_str("# coefficient table F = sum A_l(x) y^l\n");
            for (l, row) in t.iter().enumerate() {
                let _ = writeln!(s, "A_{l} = {}", row.to_text());
            }
        }
        if let Some(r) = report {
            let _ = writeln!(
                s,
                "# degree bound: {}",
                if r.passed() { "pass" } else { "FAIL" }
            );
            for b in &r.bands {
                let max = b.max_x_exponent.map_or("-".to_string(), |i| i.to_string());
                let _ = writeln!(
                    s,
                    "band m={} y<{} bound={} max_i={}",
                    b.m, b.y_cap, b.bound, max
                );
            }
            for v in &r.violations {
                let _ = writeln!(s, "violation i={} j={} m={}", v.i, v.j, v.m);
            }
        }
        if let Some(g) = grading {
            s.push_str("# v_s exponents e(i,j) = (i + j - 1)/(p^s - 1)\n");
            for ((i, j), e) in g {
                let _ = writeln!(s, "e({i},{j}) = {e}");
            }
        }
        s
    };
    Ok(Outcome::with_status(out, passed))
}

#[derive(Serialize)]
struct PseriesDoc {
    header: Header,
    k: u32,
    validity_bound: u64,
    series: PolyJson,
}

fn run_pseries(a: &PseriesArgs, guards: Guards) -> Result<Outcome, FglError> {
    let params = recursion_params(a.p, a.s)?;
    check_level(params, a.level, guards)?;
    let mut tower = FglTower::with_limits(params, guards.engine())?;
    let f = tower.extend_to(a.level)?;
    let ps = p_series(f, a.k)?;
    let out = if a.format.json() {
        to_json_line(&PseriesDoc {
            header: Header::of(f),
            k: a.k,
            validity_bound: ps.validity_bound,
            series: ps.series.to_json_value(),
        })
    } else {
        format!(
            "{}[{}^{}](x) = {} mod x^{}\n",
            Header::of(f).text(),
            a.p,
            a.k,
            ps.series.to_text(),
            ps.validity_bound
        )
    };
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct OracleDoc {
    p: u64,
    s: u32,
    degree: u64,
    poly_rational: PolyJson,
    poly_mod_p: PolyJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    associative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pseries_ok: Option<bool>,
}

fn run_oracle(a: &OracleArgs, guards: Guards) -> Result<Outcome, FglError> {
    let params = FglParams::any_height(a.p, a.s)?;
    check_degree(a.degree, guards)?;
    let o = oracle_fgl(params, a.degree)?;
    let assoc = if a.check_associativity {
        Some(o.check_associativity()?)
    } else {
        None
    };
    let pser = if a.check_pseries {
        Some(o.check_p_series()?)
    } else {
        None
    };
    let passed = assoc.unwrap_or(true) && pser.unwrap_or(true);
    let out = if a.format.json() {
        to_json_line(&OracleDoc {
            p: a.p,
            s: a.s,
            degree: a.degree,
            poly_rational: o.poly_rational.to_json_value(),
            poly_mod_p: o.poly_mod_p.to_json_value(),
            associative: assoc,
            pseries_ok: pser,
        })
    } else {
        let mut s = format!(
            "# p={} s={} q={} degree<{}\n",
            a.p,
            a.s,
            params.q(),
            a.degree
        );
        let _ = writeln!(s, "over Q: {}", o.poly_rational.to_text());
        let _ = writeln!(s, "mod {}: {}", a.p, o.poly_mod_p.to_text());
        if let Some(ok) = assoc {
            let _ = writeln!(s, "associativity: {}", if ok { "pass" } else { "FAIL" });
        }
        if let Some(ok) = pser {
            let _ = writeln!(s, "[p](x) = x^(p^s): {}", if ok { "pass" } else { "FAIL" });
        }
        s
    };
    Ok(Outcome::with_status(out, passed))
}

#[derive(Serialize)]
struct MismatchJson {
    i: u32,
    j: u32,
    engine: u64,
    oracle: u64,
}

#[derive(Serialize)]
struct VerifyDoc {
    header: Header,
    degree: u64,
    region_size: u64,
    agrees: bool,
    mismatches: Vec<MismatchJson>,
}

fn render_compare(f: &TruncatedFgl, r: &CompareReport, json: bool) -> String {
    if json {
        to_json_line(&VerifyDoc {
            header: Header::of(f),
            degree: r.degree,
            region_size: r.region_size,
            agrees: r.agrees(),
            mismatches: r
                .mismatches
                .iter()
                .map(|m| MismatchJson {
                    i: m.i,
                    j: m.j,
                    engine: m.engine,
                    oracle: m.oracle,
                })
                .collect(),
        })
    } else {
        let mut s = Header::of(f).text();
        let _ = writeln!(
            s,
            "# region i+j<{} j<{} ({} monomials)",
            r.degree, r.y_cap, r.region_size
        );
        for m in &r.mismatches {
            let _ = writeln!(
                s,
                "mismatch x^{}*y^{}: engine {} oracle {}",
                m.i, m.j, m.engine, m.oracle
            );
        }
        let _ = writeln!(
            s,
            "{}",
            if r.agrees() {
                "agree".to_string()
            } else {
                format!("DISAGREE ({} terms)", r.mismatches.len())
            }
        );
        s
    }
}

fn run_verify(a: &VerifyArgs, guards: Guards) -> Result<Outcome, FglError> {
    let params = recursion_params(a.p, a.s)?;
    check_level(params, a.level, guards)?;
    let degree = a.degree.unwrap_or_else(|| default_degree(params, a.level));
    check_degree(degree, guards)?;
    let mut tower = FglTower::with_limits(params, guards.engine())?;
    let f = tower.extend_to(a.level)?;
    let o = oracle_fgl(params, degree)?;
    verify_outcome(f, &o, a.format.json())
}

fn verify_outcome(f: &TruncatedFgl, o: &OracleFgl, json: bool) -> Result<Outcome, FglError> {
    let r = compare(f, o)?;
    Ok(Outcome::with_status(
        render_compare(f, &r, json),
        r.agrees(),
    ))
}

#[derive(Serialize)]
struct ChernHeader {
    p: u64,
    s: u32,
    k: u32,
    m: usize,
    n: u32,
    u_cap: u64,
}

#[derive(Serialize)]
struct NamedRelation {
    i: usize,
    poly: PolyJson,
}

#[derive(Serialize)]
struct ChernDoc {
    header: ChernHeader,
    relations: Vec<NamedRelation>,
}

fn run_chern(a: &ChernArgs, guards: Guards) -> Result<Outcome, FglError> {
    let params = recursion_params(a.p, a.s)?;
    if a.k == 0 {
        return Err(invalid("--k must be at least 1"));
    }
    let limits = ChernLimits {
        max_terms: guards.max_chern_terms,
        engine: guards.engine(),
    };
    let set = relation_set_with_limits(params, a.k, limits)?;
    let header = ChernHeader {
        p: a.p,
        s: a.s,
        k: a.k,
        m: set.m,
        n: set.level,
        u_cap: set.u_cap,
    };
    let out = if a.format.json() {
        to_json_line(&ChernDoc {
            header,
            relations: set
                .relations
                .iter()
                .enumerate()
                .map(|(i, r)| NamedRelation {
                    i: i + 1,
                    poly: r.to_json_value(),
                })
                .collect(),
        })
    } else {
        let mut s = format!(
            "# p={} s={} k={} m={} n={} u_cap={}\n",
            header.p, header.s, header.k, header.m, header.n, header.u_cap
        );
        for (i, r) in set.relations.iter().enumerate() {
            let _ = writeln!(s, "relation_{} = {}", i + 1, r.to_text());
        }
        s
    };
    Ok(Outcome::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::SparsePoly;

    #[test]
    fn corrupted_engine_output_fails_verification() {
        let params = FglParams::new(2, 2).unwrap();
        let t = FglTower::compute(params, 2).unwrap();
        let o = oracle_fgl(params, 5).unwrap();
        let extra = SparsePoly::from_terms(
            t.top().poly().vars().clone(),
            params.field(),
            [(vec![3, 1], 1)],
        )
        .unwrap();
        let bad = TruncatedFgl::from_poly(params, 2, t.top().poly().add(&extra).unwrap()).unwrap();

        let out = verify_outcome(&bad, &o, false).unwrap();
        assert_eq!(out.code, EXIT_VERIFICATION_FAILED);
        assert!(out.stdout.contains("mismatch x^3*y^1: engine 1 oracle 0"));
        assert!(out.stdout.ends_with("DISAGREE (1 terms)\n"));

        let out = verify_outcome(&bad, &o, true).unwrap();
        assert_eq!(out.code, EXIT_VERIFICATION_FAILED);
        assert!(out.stdout.contains(r#""agrees":false"#));

        assert_eq!(verify_outcome(t.top(), &o, false).unwrap().code, EXIT_OK);
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(
            Outcome::error(FglError::InvalidParameter("x".into())).code,
            EXIT_INVALID
        );
        let r = FglError::Resource {
            what: "x".into(),
            projected: 2,
            limit: 1,
        };
        assert_eq!(Outcome::error(r).code, EXIT_RESOURCE);
        let g = FglError::Grading {
            i: 1,
            j: 1,
            modulus: 3,
        };
        assert_eq!(Outcome::error(g).code, EXIT_VERIFICATION_FAILED);
    }
}
