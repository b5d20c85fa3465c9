use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};

use hurwitz_core::algebra::rational::{parse_rational, to_f64};
use hurwitz_core::constellation::{census, census_per_class, sum_constellation_weights};
use hurwitz_core::hurwitz::{pure_hurwitz_bruteforce, pure_hurwitz_char, weighted_hurwitz, weighted_hurwitz_with};
use hurwitz_core::matrix_integral::{hciz_closed, ho_closed, tau_closed};
use hurwitz_core::symmetric::partitions_of;
use hurwitz_core::tau::{connected_table, tau_table};
use hurwitz_core::{
    wire, CharTables, HurwitzError, MatrixReport, Partition, ProfileTuple, Rational, SpectralPair, Spectrum,
    WeightGenSpec,
};

use crate::{Check, Common, Matrix, Method, Numeric};

const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_VERIFY: u8 = 4;

pub struct Output {
    value: Value,
    code: u8,
}

pub struct Failure {
    pub error: String,
    pub code: u8,
    pub partial: Option<Value>,
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        let code = match e {
            HurwitzError::Capacity { .. } => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Self {
            error: e.to_string(),
            code,
            partial: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        error: msg.into(),
        code: EXIT_USAGE,
        partial: None,
    }
}

type Outcome = Result<Output, Failure>;

impl Output {
    fn ok(value: Value) -> Self {
        Self { value, code: 0 }
    }

    fn checked(value: Value, passed: bool) -> Self {
        Self {
            value,
            code: if passed { 0 } else { EXIT_VERIFY },
        }
    }

    pub fn emit(self, out: Option<&Path>) -> Result<ExitCode, Failure> {
        let mut text = serde_json::to_string_pretty(&self.value).expect("json");
        text.push('\n');
        match out {
            Some(path) => fs::write(path, text).map_err(|e| Failure {
                error: format!("cannot write {}: {e}", path.display()),
                code: 1,
                partial: None,
            })?,
            None => print!("{text}"),
        }
        Ok(ExitCode::from(self.code))
    }
}

fn parse_profiles(s: &str) -> Result<Vec<Partition>, Failure> {
    let parts = s
        .split(';')
        .map(|p| p.parse::<Partition>())
        .collect::<Result<Vec<_>, _>>()?;
    if parts.is_empty() {
        return Err(usage("no profiles given"));
    }
    Ok(parts)
}

fn parse_numeric(list: &Option<Vec<String>>) -> Result<Option<Vec<Rational>>, Failure> {
    list.as_ref()
        .map(|xs| xs.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(Failure::from)
}

/// Symbolic parameters, or numeric ones when `--c`/`--d` are present.
fn weight_gen(common: &Common, numeric: &Numeric) -> Result<WeightGenSpec, Failure> {
    let c = parse_numeric(&numeric.c)?;
    let d = parse_numeric(&numeric.d)?;
    if c.is_none() && d.is_none() {
        return Ok(WeightGenSpec::symbolic(common.l, common.m));
    }
    let c = c.unwrap_or_default();
    let d = d.unwrap_or_default();
    if c.len() != common.l || d.len() != common.m {
        return Err(usage(format!(
            "--c has {} values and --d has {}, expected L={} and M={}",
            c.len(),
            d.len(),
            common.l,
            common.m
        )));
    }
    Ok(WeightGenSpec::numeric(c, d))
}

pub fn pure(profiles: &str, connected: bool, method: Method, work_bound: u128) -> Outcome {
    let tuple = ProfileTuple::new(parse_profiles(profiles)?)?;
    let h = match method {
        Method::Character => {
            let tables = CharTables::up_to(tuple.weight().unwrap_or(0));
            pure_hurwitz_char(&tuple, &tables)?
        }
        Method::Bruteforce => pure_hurwitz_bruteforce(&tuple, false, work_bound)?,
    };
    let h_connected = if connected {
        wire::rational(&pure_hurwitz_bruteforce(&tuple, true, work_bound)?)
    } else {
        Value::Null
    };
    let method = match method {
        Method::Character => "character",
        Method::Bruteforce => "bruteforce",
    };
    Ok(Output::ok(json!({
        "H": wire::rational(&h),
        "H_connected": h_connected,
        "method": method,
    })))
}

pub fn weighted(common: &Common, numeric: &Numeric, profiles: &str, connected: bool) -> Outcome {
    let pair = parse_profiles(profiles)?;
    let [mu, nu] = <[Partition; 2]>::try_from(pair).map_err(|_| usage("--profiles must be \"μ;ν\""))?;
    let g = weight_gen(common, numeric)?;
    let tables = CharTables::up_to(mu.weight());
    let mut coefficients = Vec::new();
    for d in 0..=common.d_max {
        let h = if connected {
            weighted_hurwitz_with(&g, d, &mu, &nu, |ps| {
                pure_hurwitz_bruteforce(&ProfileTuple::new(ps.to_vec())?, true, common.work_bound)
            })?
        } else {
            weighted_hurwitz(&g, d, &mu, &nu, &tables)?
        };
        let value = match g.values() {
            Some((c, dv)) => wire::rational(&h.eval(c, dv)?),
            None => Value::Null,
        };
        coefficients.push(json!({ "d": d, "H": wire::poly(&h), "value": value }));
    }
    Ok(Output::ok(json!({
        "N": mu.weight(),
        "mu": mu.parts(),
        "nu": nu.parts(),
        "L": common.l,
        "M": common.m,
        "connected": connected,
        "coefficients": coefficients,
    })))
}

pub fn table(common: &Common, connected: bool) -> Outcome {
    let n_max = common.n_max_or(3);
    let g = WeightGenSpec::symbolic(common.l, common.m);
    let tau = tau_table(&g, n_max, common.d_max, &CharTables::up_to(n_max))?;
    let t = if connected { connected_table(&tau)? } else { tau };
    Ok(Output::ok(wire::tau_table(&t)))
}

fn parse_spectrum(l: usize, s: &str) -> Result<Spectrum, Failure> {
    let j = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| usage(format!("bad spectrum entry {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum::new(l, j))
}

pub fn constellations(common: &Common, spectrum: &str) -> Outcome {
    let spectrum = parse_spectrum(common.l, spectrum)?;
    let n_max = common.n_max_or(3);
    let tables = CharTables::up_to(n_max);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let (entries, method) = match census(n, &spectrum, common.d_max, common.work_bound) {
            Ok(e) => (e, "enumeration"),
            Err(HurwitzError::Capacity { .. }) => (census_per_class(n, &spectrum, common.d_max, &tables)?, "per-class"),
            Err(e) => return Err(e.into()),
        };
        for mut v in wire::census(&entries).as_array().cloned().unwrap_or_default() {
            v["N"] = json!(n);
            v["method"] = json!(method);
            out.push(v);
        }
    }
    Ok(Output::ok(Value::Array(out)))
}

fn default_eigenvalues(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (0..n).map(|i| 2.0 * (i + 1) as f64 / (n + 1) as f64 - 1.0).collect();
    let b = a.iter().map(|x| (x + 0.5) / 2.0).collect();
    (a, b)
}

fn spectral_pair(m: &Matrix) -> Result<SpectralPair, Failure> {
    let (da, db) = default_eigenvalues(m.n);
    let a = m.a.clone().unwrap_or(da);
    let b = m.b.clone().unwrap_or(db);
    if a.len() != m.n || b.len() != m.n {
        return Err(usage(format!("--a and --b need exactly n={} values", m.n)));
    }
    Ok(SpectralPair::new(a, b)?)
}

/// Closed form and its τ-series: HCIZ by default, linear-over-linear when `c` is given.
fn matrix_report(m: &Matrix, c: &[f64], d1: f64, n_max: usize) -> Result<MatrixReport, Failure> {
    let pair = spectral_pair(m)?;
    let tables = CharTables::up_to(n_max);
    let beta = m.beta.unwrap_or(-1.0 / (m.n as f64 * d1));
    let lhs = match c.first() {
        Some(&c1) => ho_closed(&pair, c1, d1, m.gamma)?,
        None => hciz_closed(&pair, m.gamma)?,
    };
    let rhs = tau_closed(&pair, c, &[d1], beta, m.gamma, n_max, &tables)?;
    Ok(MatrixReport::new(m.n, m.gamma, lhs, rhs, n_max))
}

pub fn hciz(m: &Matrix, numeric: &Numeric, n_max: usize) -> Outcome {
    let c: Vec<f64> = parse_numeric(&numeric.c)?.unwrap_or_default().iter().map(to_f64).collect();
    let d: Vec<f64> = parse_numeric(&numeric.d)?.unwrap_or_default().iter().map(to_f64).collect();
    if c.len() > 1 || d.len() > 1 || (c.len() == 1 && d.is_empty()) {
        return Err(usage("use at most one --c value, together with one --d value"));
    }
    let d1 = d.first().copied().unwrap_or(1.0);
    Ok(Output::ok(wire::matrix_report(&matrix_report(m, &c, d1, n_max)?)))
}

fn key_json(n: usize, mu: &Partition, nu: &Partition) -> Value {
    json!({ "N": n, "mu": mu.parts(), "nu": nu.parts() })
}

pub fn verify(check: Check, common: &Common, m: &Matrix) -> Outcome {
    match check {
        Check::Hciz => {
            let report = matrix_report(m, &[], 1.0, common.n_max_or(12))?;
            let passed = report.rel_err < m.tol;
            Ok(Output::checked(wire::matrix_report(&report), passed))
        }
        Check::Tau => verify_tau(common),
        Check::Constellations => verify_constellations(common),
        Check::Connected => verify_connected(common),
    }
}

fn report(name: &str, common: &Common, compared: Vec<Value>) -> (Value, bool) {
    let passed = compared.iter().all(|c| c["equal"] == json!(true));
    let v = json!({
        "check": name,
        "L": common.l,
        "M": common.m,
        "Nmax": common.n_max_or(3),
        "dmax": common.d_max,
        "passed": passed,
        "compared": compared,
    });
    (v, passed)
}

fn verify_tau(common: &Common) -> Outcome {
    let n_max = common.n_max_or(3);
    let g = WeightGenSpec::symbolic(common.l, common.m);
    let tables = CharTables::up_to(n_max);
    let tau = tau_table(&g, n_max, common.d_max, &tables)?;
    let mut compared = Vec::new();
    for n in 0..=n_max {
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                let entry = tau.entry(&mu, &nu);
                for d in 0..=common.d_max {
                    let h = weighted_hurwitz(&g, d, &mu, &nu, &tables)?;
                    let mut k = key_json(n, &mu, &nu);
                    k["d"] = json!(d);
                    k["equal"] = json!(entry.coeff(d) == h);
                    compared.push(k);
                }
            }
        }
    }
    let (v, passed) = report("tau", common, compared);
    Ok(Output::checked(v, passed))
}

fn verify_constellations(common: &Common) -> Outcome {
    let n_max = common.n_max_or(3);
    let g = WeightGenSpec::symbolic(common.l, common.m);
    let tau = tau_table(&g, n_max, common.d_max, &CharTables::up_to(n_max))?;
    let mut compared = Vec::new();
    for n in 0..=n_max {
        let sum = match sum_constellation_weights(n, common.l, common.m, common.d_max, common.work_bound) {
            Ok(s) => s,
            Err(e @ HurwitzError::Capacity { .. }) => {
                let (partial, _) = report("constellations", common, compared);
                return Err(Failure {
                    partial: Some(partial),
                    ..Failure::from(e)
                });
            }
            Err(e) => return Err(e.into()),
        };
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                let mut k = key_json(n, &mu, &nu);
                k["equal"] = json!(sum.entry(&mu, &nu) == tau.entry(&mu, &nu));
                compared.push(k);
            }
        }
    }
    let (v, passed) = report("constellations", common, compared);
    Ok(Output::checked(v, passed))
}

fn verify_connected(common: &Common) -> Outcome {
    let n_max = common.n_max_or(3);
    let g = WeightGenSpec::symbolic(common.l, common.m);
    let tau = tau_table(&g, n_max, common.d_max, &CharTables::up_to(n_max))?;
    let conn = connected_table(&tau)?;
    let mut compared = Vec::new();
    for n in 1..=n_max {
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                let entry = conn.entry(&mu, &nu);
                for d in 0..=common.d_max {
                    let counted = weighted_hurwitz_with(&g, d, &mu, &nu, |ps| {
                        pure_hurwitz_bruteforce(&ProfileTuple::new(ps.to_vec())?, true, common.work_bound)
                    });
                    let h = match counted {
                        Ok(h) => h,
                        Err(e @ HurwitzError::Capacity { .. }) => {
                            let (partial, _) = report("connected", common, compared);
                            return Err(Failure {
                                partial: Some(partial),
                                ..Failure::from(e)
                            });
                        }
                        Err(e) => return Err(e.into()),
                    };
                    let mut k = key_json(n, &mu, &nu);
                    k["d"] = json!(d);
                    k["equal"] = json!(entry.coeff(d) == h);
                    compared.push(k);
                }
            }
        }
    }
    let (v, passed) = report("connected", common, compared);
    Ok(Output::checked(v, passed))
}
