use serde_json::{json, Map, Value};

use hkm::arith::is_fundamental;
use hkm::asympt::{asymptotic_report, positivity_scan};
use hkm::borcherds::{
    check_antisymmetry, default_grade_bound, expand_psi, sum_side_check, to_phi, weyl_vector,
    weyl_vector_closed_form, WeylChamber,
};
use hkm::characters::{dim_cusp, dim_eisenstein, dim_modular, index_gamma0, index_gamma1, sturm_bound};
use hkm::exact::{parse_rational, rat_to_string, Rational};
use hkm::kacmoody::{cartan_for_disc, mult_table, simple_data};
use hkm::quadfield::{QuadElem, QuadField};
use hkm::solver::{
    constant_duality_check, e_eps_star, exists_fm, integrality_report, lift_weight, Level, SolveOptions, Solver,
    WHForm, DEFAULT_PREC,
};
use hkm::weilrep::{check_relations, disc_form, support_residues};
use hkm::Error;

use crate::{Command, ConfigError, Format};

const DEFAULT_LEN: usize = 20;
const DUALITY_PREC: i64 = 30;
const ASYMPT_FORMS: [(u64, u64); 5] = [(12, 1), (12, 12), (8, 1), (8, 8), (21, 1)];

/// A validated command with every default filled in.
pub enum Job {
    Basis { n: u64, m: u64, prec: i64 },
    Existence { n: u64, max: u64 },
    Sturm { n: u64, prec: i64 },
    Eisenstein { n: u64, len: usize },
    Dim { n: u64, weight: i64 },
    Weilrep { n: u64 },
    Weyl { n: u64, m: u64, prec: i64 },
    Borcherds { n: u64, m: u64, prec: i64, auto_prec: bool, bound: Option<Rational> },
    Multtable { n: u64, prec: i64, auto_prec: bool, bound: Option<Rational> },
    Asympt { n: u64, m: u64, from: i64, to: i64, positivity: bool },
}

pub struct Plan {
    pub command: &'static str,
    pub job: Job,
    pub params: Map<String, Value>,
    pub defaulted: Vec<&'static str>,
}

impl Plan {
    pub fn metadata(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!("hkm"));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(self.command));
        m.insert("parameters".into(), Value::Object(self.params.clone()));
        m.insert("defaulted".into(), json!(self.defaulted));
        m
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
    /// Parameters only known after the run, such as a computed grade bound.
    pub extra_metadata: Map<String, Value>,
}

struct Builder {
    params: Map<String, Value>,
    defaulted: Vec<&'static str>,
}

impl Builder {
    fn new(n: u64) -> Result<Builder, ConfigError> {
        if !is_fundamental(n as i64) {
            return Err(ConfigError(format!("--disc {} is not a fundamental discriminant N > 1", n)));
        }
        let mut params = Map::new();
        params.insert("N".into(), json!(n));
        Ok(Builder { params, defaulted: Vec::new() })
    }

    fn set<T: Into<Value> + Clone>(&mut self, key: &'static str, given: Option<T>, default: T) -> T {
        let v = match given {
            Some(v) => v,
            None => {
                self.defaulted.push(key);
                default
            }
        };
        self.params.insert(key.into(), v.clone().into());
        v
    }

    fn put<T: Into<Value>>(&mut self, key: &'static str, v: T) {
        self.params.insert(key.into(), v.into());
    }
}

fn positive(name: &str, v: i64) -> Result<(), ConfigError> {
    if v < 1 {
        return Err(ConfigError(format!("--{} must be positive, got {}", name, v)));
    }
    Ok(())
}

fn grade_bound(s: &Option<String>) -> Result<Option<Rational>, ConfigError> {
    let Some(s) = s else { return Ok(None) };
    match parse_rational(s) {
        Some(r) if r > Rational::from_integer(0.into()) => Ok(Some(r)),
        _ => Err(ConfigError(format!("--grade-bound must be a positive rational, got {:?}", s))),
    }
}

/// Checks the arguments and fills in defaults without computing anything.
pub fn plan(cmd: &Command, format: Format) -> Result<Plan, ConfigError> {
    let tabular = matches!(cmd, Command::Basis { .. } | Command::Existence { .. } | Command::Multtable { .. } | Command::Asympt { .. });
    if format == Format::Csv && !tabular {
        return Err(ConfigError(format!("{} has no tabular output; use json or plain", cmd.name())));
    }
    let (job, b) = match cmd {
        Command::Basis { d, m, prec } => {
            let mut b = Builder::new(d.disc)?;
            positive("m", *m as i64)?;
            b.put("m", *m);
            let prec = b.set("prec", *prec, DEFAULT_PREC);
            positive("prec", prec)?;
            (Job::Basis { n: d.disc, m: *m, prec }, b)
        }
        Command::Existence { d, max } => {
            let mut b = Builder::new(d.disc)?;
            let max = b.set("max", *max, d.disc);
            positive("max", max as i64)?;
            (Job::Existence { n: d.disc, max }, b)
        }
        Command::Sturm { d, prec } => {
            let mut b = Builder::new(d.disc)?;
            b.put("m", 1);
            let prec = b.set("prec", *prec, DEFAULT_PREC);
            positive("prec", prec)?;
            (Job::Sturm { n: d.disc, prec }, b)
        }
        Command::Eisenstein { d, len } => {
            let mut b = Builder::new(d.disc)?;
            let len = b.set("len", *len, DEFAULT_LEN);
            positive("len", len as i64)?;
            b.put("solve_prec", DUALITY_PREC);
            (Job::Eisenstein { n: d.disc, len }, b)
        }
        Command::Dim { d, weight } => {
            let mut b = Builder::new(d.disc)?;
            b.put("weight", *weight);
            (Job::Dim { n: d.disc, weight: *weight }, b)
        }
        Command::Weilrep { d } => (Job::Weilrep { n: d.disc }, Builder::new(d.disc)?),
        Command::Weyl { d, m, prec } => {
            let mut b = Builder::new(d.disc)?;
            let m = b.set("m", *m, 1);
            positive("m", m as i64)?;
            let prec = b.set("prec", *prec, DEFAULT_PREC);
            positive("prec", prec)?;
            (Job::Weyl { n: d.disc, m, prec }, b)
        }
        Command::Borcherds { d, m, prec, grade_bound: gb } => {
            let mut b = Builder::new(d.disc)?;
            let m = b.set("m", *m, 1);
            positive("m", m as i64)?;
            let auto_prec = prec.is_none();
            let prec = b.set("prec", *prec, DEFAULT_PREC);
            positive("prec", prec)?;
            let bound = grade_bound(gb)?;
            b.set("grade_bound", gb.clone().map(Value::from), Value::Null);
            (Job::Borcherds { n: d.disc, m, prec, auto_prec, bound }, b)
        }
        Command::Multtable { d, prec, grade_bound: gb } => {
            let mut b = Builder::new(d.disc)?;
            b.put("m", 1);
            let auto_prec = prec.is_none();
            let prec = b.set("prec", *prec, DEFAULT_PREC);
            positive("prec", prec)?;
            let bound = grade_bound(gb)?;
            b.set("grade_bound", gb.clone().map(Value::from), Value::Null);
            (Job::Multtable { n: d.disc, prec, auto_prec, bound }, b)
        }
        Command::Asympt { d, m, from, to, positivity } => {
            let mut b = Builder::new(d.disc)?;
            if !ASYMPT_FORMS.contains(&(d.disc, *m)) {
                return Err(ConfigError(format!(
                    "main terms are available for (N, m) in (12, 1), (12, 12), (8, 1), (8, 8), (21, 1); got ({}, {})",
                    d.disc, m
                )));
            }
            b.put("m", *m);
            let from = b.set("from", *from, 1);
            let to = b.set("to", *to, DEFAULT_PREC);
            positive("from", from)?;
            if to < from {
                return Err(ConfigError(format!("--to {} is below --from {}", to, from)));
            }
            b.put("prec", to + 1);
            b.put("positivity", *positivity);
            (Job::Asympt { n: d.disc, m: *m, from, to, positivity: *positivity }, b)
        }
    };
    Ok(Plan { command: cmd.name(), job, params: b.params, defaulted: b.defaulted })
}

fn get_form(n: u64, m: u64, prec: i64) -> hkm::Result<WHForm> {
    // each step through j(Nτ) costs N coefficients
    let steps = (m as i64 - 1) / n as i64;
    let mut s = Solver::new(n, SolveOptions { prec: prec + steps * n as i64, ..Default::default() })?;
    let f = s.get(m)?;
    Ok(if f.prec() > prec { f.truncate(prec) } else { f })
}

/// Runs `step` on f_m, re-solving once with more coefficients when the default was too short.
fn with_prec<T>(
    n: u64,
    m: u64,
    prec: i64,
    auto: bool,
    step: impl Fn(&WHForm) -> hkm::Result<T>,
) -> hkm::Result<(T, i64)> {
    let f = get_form(n, m, prec)?;
    match step(&f) {
        Err(Error::InsufficientPrecision { needed, .. }) if auto => {
            let p: i64 = needed.parse().map_err(|_| Error::InsufficientPrecision { needed: needed.clone(), have: prec.to_string() })?;
            let f = get_form(n, m, p)?;
            Ok((step(&f)?, p))
        }
        r => r.map(|t| (t, prec)),
    }
}

fn quad(x: &QuadElem) -> Value {
    let mut v = serde_json::to_value(x).expect("serializable");
    if let Value::Object(o) = &mut v {
        o.insert("display".into(), json!(x.to_string()));
    }
    v
}

fn coefficient_rows(f: &WHForm) -> Vec<(i64, String)> {
    f.table().into_iter().map(|(e, c)| (e, rat_to_string(&c))).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(plan: &Plan) -> hkm::Result<Output> {
    let mut extra = Map::new();
    let (result, table) = match plan.job {
        Job::Basis { n, m, prec } => {
            let f = get_form(n, m, prec)?;
            let rows = coefficient_rows(&f);
            let result = json!({
                "N": n,
                "m": m,
                "s_m": f.s_m,
                "prec": f.prec(),
                "weight": rat_to_string(&lift_weight(&f)),
                "coefficients": rows.iter().map(|(e, c)| json!({"n": e, "a": c})).collect::<Vec<_>>(),
                "provenance": to_value(&f.provenance),
            });
            let t = Table { header: vec!["n", "a"], rows: rows.into_iter().map(|(e, c)| vec![e.to_string(), c]).collect() };
            (result, Some(t))
        }
        Job::Existence { n, max } => {
            let mut rows = Vec::new();
            for m in 1..=max {
                rows.push((m, exists_fm(n, m)?));
            }
            let mut residues = Vec::new();
            for r in 0..n {
                let m = if r == 0 { n } else { r };
                if exists_fm(n, m)? {
                    residues.push(r);
                }
            }
            let result = json!({
                "N": n,
                "max": max,
                "residues": residues,
                "forms": rows.iter().map(|(m, e)| json!({"m": m, "exists": e})).collect::<Vec<_>>(),
            });
            let t = Table { header: vec!["m", "exists"], rows: rows.into_iter().map(|(m, e)| vec![m.to_string(), e.to_string()]).collect() };
            (result, Some(t))
        }
        Job::Sturm { n, prec } => {
            let f = get_form(n, 1, prec)?;
            (to_value(&integrality_report(&f)?), None)
        }
        Job::Eisenstein { n, len } => {
            // E^ε* is pinned down by its first coefficients only once enough of them are seen
            let e = e_eps_star(n, len.max(100))?;
            let coeffs: Vec<Value> = (0..len as i64)
                .map(|j| json!({"n": j, "b": rat_to_string(&e.coeff_int(j).unwrap_or_default())}))
                .collect();
            let mut s = Solver::new(n, SolveOptions { prec: DUALITY_PREC, ..Default::default() })?;
            let mut duality = Vec::new();
            for m in 1..=n {
                if exists_fm(n, m)? {
                    duality.push(to_value(&constant_duality_check(&s.get(m)?)?));
                }
            }
            (json!({"N": n, "coefficients": coeffs, "duality": duality}), None)
        }
        Job::Dim { n, weight } => {
            let chi = Level::new(n)?.chi;
            let i0 = index_gamma0(n);
            let result = json!({
                "N": n,
                "weight": weight,
                "index_gamma0": i0,
                "index_gamma1": index_gamma1(n),
                "dim_modular": dim_modular(n, weight, &chi)?,
                "dim_cusp": dim_cusp(n, weight, &chi)?,
                "dim_eisenstein": dim_eisenstein(n, weight, &chi)?,
                "sturm_bound": if weight >= 0 { json!(sturm_bound(i0, weight as u64)) } else { Value::Null },
            });
            (result, None)
        }
        Job::Weilrep { n } => {
            let d = disc_form(QuadField::from_disc(n)?.n1)?;
            let c = check_relations(&d);
            let mut v = to_value(&c);
            if let Value::Object(o) = &mut v {
                o.insert("all_ok".into(), json!(c.all_ok()));
                o.insert("norm_residues".into(), json!(support_residues(&d)));
            }
            (v, None)
        }
        Job::Weyl { n, m, prec } => {
            let f = get_form(n, m, prec)?;
            let w = WeylChamber::containing_interior(&f)?;
            let rho = weyl_vector(&f, &w)?;
            let closed = weyl_vector_closed_form(&w.field);
            let walls: Map<String, Value> =
                w.walls.iter().map(|(m, ls)| (m.to_string(), Value::Array(ls.iter().map(quad).collect()))).collect();
            let simple = cartan_for_disc(n).ok().map(|cd| to_value(&simple_data(&cd)));
            let result = json!({
                "N": n,
                "m": m,
                "interior": [quad(&w.interior.0), quad(&w.interior.1)],
                "walls": walls,
                "weyl_vector": quad(&rho),
                "closed_form": quad(&closed),
                "matches_closed_form": rho == closed,
                "simple_data": simple,
            });
            (result, None)
        }
        Job::Borcherds { n, m, prec, auto_prec, ref bound } => {
            let ((psi, b, reports), used) = with_prec(n, m, prec, auto_prec, |f| {
                let b = match bound {
                    Some(b) => b.clone(),
                    None => {
                        let w = WeylChamber::containing_interior(f)?;
                        let rho = weyl_vector(f, &w)?;
                        default_grade_bound(&w.field, &cartan_for_disc(n)?, &rho)?
                    }
                };
                let psi = expand_psi(f, &b)?;
                let reports = if m == 1 {
                    let cd = cartan_for_disc(n)?;
                    let phi = to_phi(&psi);
                    Some((check_antisymmetry(&phi, &cd, 2), sum_side_check(&phi, &cd)?))
                } else {
                    None
                };
                Ok((psi, b, reports))
            })?;
            let f = get_form(n, m, used)?;
            extra.insert("prec".into(), json!(used));
            extra.insert("grade_bound".into(), json!(rat_to_string(&b)));
            let (anti, sum) = match reports {
                Some((a, s)) => (to_value(&a), to_value(&s)),
                None => (Value::Null, Value::Null),
            };
            let result = json!({
                "N": n,
                "m": m,
                "weight": rat_to_string(&lift_weight(&f)),
                "weyl_vector": quad(&psi.weyl_vector),
                "grade_bound": rat_to_string(&b),
                "negative_norms": psi.negative_norms(),
                "coefficient_gcd": psi.coefficient_gcd().to_string(),
                "terms": to_value(&psi.terms),
                "antisymmetry": anti,
                "sum_side": sum,
            });
            (result, None)
        }
        Job::Multtable { n, prec, auto_prec, ref bound } => {
            let cd = cartan_for_disc(n)?;
            let b = match bound {
                Some(b) => b.clone(),
                None => default_grade_bound(&cd.field, &cd, &weyl_vector_closed_form(&cd.field))?,
            };
            let (rows, used) = with_prec(n, 1, prec, auto_prec, |f| mult_table(&cd, f, &b))?;
            extra.insert("prec".into(), json!(used));
            extra.insert("grade_bound".into(), json!(rat_to_string(&b)));
            let t = Table {
                header: vec!["nu", "Nnunu'", "s", "a", "mult"],
                rows: rows
                    .iter()
                    .map(|r| vec![r.nu.to_string(), r.norm.to_string(), r.s.to_string(), r.a.clone(), r.mult.clone()])
                    .collect(),
            };
            let result = json!({
                "N": n,
                "a": cd.a,
                "grade_bound": rat_to_string(&b),
                "rows": rows.iter().map(|r| {
                    let mut v = to_value(r);
                    if let Value::Object(o) = &mut v {
                        o.insert("nu".into(), quad(&r.nu));
                    }
                    v
                }).collect::<Vec<_>>(),
            });
            (result, Some(t))
        }
        Job::Asympt { n, m, from, to, positivity } => {
            let f = get_form(n, m, to + 1)?;
            let rep = asymptotic_report(&f, from, to)?;
            let pos = if positivity { to_value(&positivity_scan(&f, from, to)?) } else { Value::Null };
            let t = Table {
                header: vec!["n", "exact", "main", "relerr", "bound"],
                rows: rep
                    .rows
                    .iter()
                    .map(|r| vec![r.n.to_string(), r.exact.clone(), r.main.to_string(), r.relerr.to_string(), r.bound.to_string()])
                    .collect(),
            };
            let mut v = to_value(&rep);
            if let Value::Object(o) = &mut v {
                o.insert("positivity".into(), pos);
            }
            (v, Some(t))
        }
    };
    Ok(Output { result, table, extra_metadata: extra })
}
