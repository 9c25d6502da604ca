use std::fmt;
use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::json;

use qcodes_core::cyclotomic::{CosetFamily, CyclotomicError};
use qcodes_core::duadic::{self, DuadicError, DuadicTower};
use qcodes_core::exec::Exec;
use qcodes_core::gf2::BitPoly;
use qcodes_core::golden::{self, GoldenError, TableReport};
use qcodes_core::linear_code::{CodeError, CodeJson, LinearCode};
use qcodes_core::poly_code::{self, DualMode, PolyCodeError, TowerContext};
use qcodes_core::quantum::{self, QuantumError, QuantumParams, Rule};

use crate::{Cli, Command, Format, Mode, RuleArg, Selection, TableArg};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs the computation rejects.
    Usage(String),
    /// A verification or golden comparison failed.
    Mismatch(String),
    /// An internal consistency check failed.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Mismatch(s) | CliError::Internal(s) => f.write_str(s),
        }
    }
}

impl From<PolyCodeError> for CliError {
    fn from(e: PolyCodeError) -> Self {
        match e {
            PolyCodeError::ConstructionInconsistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CyclotomicError> for CliError {
    fn from(e: CyclotomicError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::PolyCode(inner) => inner.into(),
            QuantumError::CrossCheck(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DuadicError> for CliError {
    fn from(e: DuadicError) -> Self {
        match e {
            DuadicError::ConstructionInconsistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GoldenError> for CliError {
    fn from(e: GoldenError) -> Self {
        match e {
            GoldenError::Quantum(q) => q.into(),
            GoldenError::Duadic(d) => d.into(),
            GoldenError::Parse { .. } => CliError::Internal(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn selection_context(sel: &Selection) -> Result<(TowerContext, qcodes_core::cyclotomic::SelectionS), CliError> {
    let ctx = poly_code::make_context(sel.setting.q, sel.setting.m)?;
    let s = ctx.selection_from_cutoff(sel.cutoff)?;
    Ok((ctx, s))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let exec = Exec::default();
    match &cli.command {
        Command::Cosets(s) => {
            let fam = CosetFamily::new(s.q, s.m)?;
            let text = match cli.format {
                Format::Json => to_json(&fam)?,
                Format::Csv => csv(
                    "max,size,is_rep,elements",
                    fam.cosets.iter().map(|c| {
                        let max = *c.iter().max().unwrap();
                        let elems: Vec<String> = c.iter().map(u64::to_string).collect();
                        format!("{max},{},{},{}", c.len(), fam.is_rep(max), elems.join(" "))
                    }),
                ),
            };
            emit(cli, &text)
        }
        Command::Construct(sel) => {
            let (ctx, s) = selection_context(sel)?;
            let rows = poly_code::evaluation_matrix(&ctx, &s, exec)?;
            let code = poly_code::build_code(&ctx, &s, exec)?;
            let bound = poly_code::distance_bound(&ctx, &s).ok();
            let doc = json!({
                "code": CodeJson { field: ctx.base.clone(), n: ctx.n, k: code.k(), rows: rows.clone() },
                "construction": {
                    "q": ctx.q, "m": ctx.m, "cutoff": sel.cutoff, "S": s.members,
                    "A": s.reps, "bound": bound, "point_exponents": ctx.point_exponents(),
                },
            });
            let text = match cli.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => csv(
                    &(0..ctx.n).map(|i| format!("c{i}")).collect::<Vec<_>>().join(","),
                    rows.iter().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
                ),
            };
            emit(cli, &text)
        }
        Command::DualCheck { selection, mode } => {
            let (ctx, s) = selection_context(selection)?;
            let mode = match mode {
                Mode::Euclidean => DualMode::Euclidean,
                Mode::Hermitian => DualMode::Hermitian,
            };
            let report = poly_code::verify_duality(&ctx, &s, mode, exec)?;
            let text = match cli.format {
                Format::Json => to_json(&report)?,
                Format::Csv => csv(
                    "q,m,cutoff,mode,n,dim_code,dim_dual,dim_predicted,row_spaces_equal,gram_zero,pass",
                    [format!(
                        "{},{},{},{:?},{},{},{},{},{},{},{}",
                        report.q,
                        report.m,
                        selection.cutoff,
                        mode,
                        report.n,
                        report.dim_code,
                        report.dim_dual,
                        report.dim_predicted,
                        report.row_spaces_equal,
                        report.gram_zero,
                        report.pass
                    )
                    .to_lowercase()],
                ),
            };
            emit(cli, &text)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Mismatch("predicted dual differs from the matrix-level dual".into()))
            }
        }
        Command::Mindist { q, m, cutoff, input, budget, samples, seed } => {
            let selection = match (q, m, cutoff) {
                (Some(q), Some(m), Some(cutoff)) => Some(Selection {
                    setting: crate::Setting { q: *q, m: *m },
                    cutoff: *cutoff,
                }),
                _ => None,
            };
            let code: LinearCode = match (&selection, input) {
                (_, Some(path)) => {
                    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
                    let body = v.get("code").cloned().unwrap_or(v);
                    let j: CodeJson = serde_json::from_value(body).map_err(|e| usage(e.to_string()))?;
                    LinearCode::try_from(j)?
                }
                (Some(sel), None) => {
                    let (ctx, s) = selection_context(sel)?;
                    poly_code::build_code(&ctx, &s, exec)?
                }
                (None, None) => return Err(usage("give --q/--m/--cutoff or --input")),
            };
            mindist(cli, &code, *budget, *samples, *seed, exec)
        }
        Command::QuantumTable { setting, pareto } => {
            let mut rows = quantum::table_search(setting.q, setting.m, exec)?;
            if *pareto {
                rows = quantum::pareto_rows(&rows);
            }
            emit(cli, &quantum_rows(cli.format, setting.q, setting.m, &rows)?)
        }
        Command::Propagate { base, n, k, d, rule, steps } => {
            let rule = match rule {
                RuleArg::Subcode => Rule::Subcode,
                RuleArg::Lengthen => Rule::Lengthen,
                RuleArg::Puncture => Rule::Puncture,
                RuleArg::DistanceDrop => Rule::DistanceDrop,
            };
            let qp = QuantumParams::new(*base, *n, *k, *d)?;
            let out = quantum::propagate(&qp, rule, *steps)?;
            let text = match cli.format {
                Format::Json => to_json(&out)?,
                Format::Csv => csv("base,n,k,d_bound", [format!("{},{},{},{}", out.base, out.n, out.k, out.d)]),
            };
            emit(cli, &text)
        }
        Command::Duadic { p, n } => duadic_dump(cli, *p, *n, exec),
        Command::Sync { p, n, u, v, relaxed, budget } => {
            let tower = DuadicTower::new(*p, *n, exec)?;
            let (params, violations) = if *relaxed {
                duadic::sync_from_multiplicities(&tower, u, v, *budget, exec)?
            } else {
                (duadic::sync_family(&tower, u, v, *budget, exec)?, Vec::new())
            };
            let text = match cli.format {
                Format::Json => to_json(&json!({
                    "p": p, "n": n, "u": u, "v": v,
                    "params": params,
                    "violations": violations,
                }))?,
                Format::Csv => csv(
                    "p,n,u,v,n_base,k1,k2,k,tolerance_cap,phase_bound,bit_bound,violations",
                    [format!(
                        "{p},{n},{},{},{},{},{},{},{},{},{},{}",
                        join(u, " "),
                        join(v, " "),
                        params.n_base,
                        params.k1,
                        params.k2,
                        params.k,
                        params.tolerance_cap,
                        opt(params.phase_bound),
                        opt(params.bit_bound),
                        csv_field(&violations.join("; "))
                    )],
                ),
            };
            emit(cli, &text)
        }
        Command::PolyOrder { hex, multiple, limit } => {
            let f = BitPoly::from_hex(hex).map_err(|e| usage(e.to_string()))?;
            let (order, method) = match multiple {
                Some(mult) => (duadic::poly_order(&f, *mult)?, "divisors_of_multiple"),
                None => (duadic::poly_order_search(&f, *limit)?, "search"),
            };
            let text = match cli.format {
                Format::Json => to_json(&json!({
                    "hex": f.to_hex(), "degree": f.degree(), "order": order, "method": method,
                }))?,
                Format::Csv => csv("hex,degree,order,method", [format!(
                    "{},{},{order},{method}",
                    f.to_hex(),
                    f.degree().map_or(String::new(), |d| d.to_string())
                )]),
            };
            emit(cli, &text)
        }
        Command::Reproduce { table } => {
            let report = match table {
                TableArg::I => golden::reproduce_table_i(exec)?,
                TableArg::Iii => golden::reproduce_table_iii()?,
                TableArg::Iv => {
                    let tower = DuadicTower::new(31, 2, exec)?;
                    golden::reproduce_table_iv(&tower, exec)?
                }
            };
            emit(cli, &report_text(cli.format, &report)?)?;
            if report.all_matched() {
                Ok(())
            } else {
                Err(CliError::Mismatch(format!(
                    "table {}: {}/{} rows matched",
                    report.table,
                    report.matched_count(),
                    report.rows.len()
                )))
            }
        }
    }
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn opt(v: Option<u64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn projective_count(q: u64, k: u32) -> Option<u64> {
    Some((q.checked_pow(k)? - 1) / (q - 1))
}

fn mindist(cli: &Cli, code: &LinearCode, budget: u64, samples: u64, seed: u64, exec: Exec) -> Result<(), CliError> {
    let q = code.field().order() as u64;
    let k = code.k();
    if k == 0 {
        return Err(usage("the zero code has no minimum distance"));
    }
    let doc = match projective_count(q, k as u32).filter(|&c| c <= budget) {
        Some(count) => {
            let d = match code.min_distance(budget, exec)? {
                qcodes_core::linear_code::Distance::Exact { d } => d,
                other => return Err(CliError::Internal(format!("expected exact distance, got {other:?}"))),
            };
            json!({"n": code.n(), "k": k, "q": q, "method": "exact", "d": d, "codewords": count})
        }
        None => {
            let w = code.sample_weights(samples, seed, exec)?;
            json!({"n": code.n(), "k": k, "q": q, "method": "sampled", "upper_bound": w,
                   "samples": samples, "seed": seed})
        }
    };
    let text = match cli.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let d = doc.get("d").or_else(|| doc.get("upper_bound")).unwrap();
            csv("n,k,q,method,value", [format!("{},{k},{q},{},{d}", code.n(), doc["method"].as_str().unwrap())])
        }
    };
    emit(cli, &text)
}

fn quantum_rows(format: Format, q: u64, m: u64, rows: &[QuantumParams]) -> Result<String, CliError> {
    Ok(match format {
        Format::Csv => csv(
            "q,m,cutoff,n,k,d_bound",
            rows.iter().map(|r| format!("{q},{m},{},{},{},{}", r.cutoff().unwrap(), r.n, r.k, r.d)),
        ),
        Format::Json => to_json(
            &rows
                .iter()
                .map(|r| {
                    json!({
                        "q": q, "m": m, "cutoff": r.cutoff(), "n": r.n, "k": r.k,
                        "d_bound": r.d, "base": r.base, "provenance": r.provenance,
                    })
                })
                .collect::<Vec<_>>(),
        )?,
    })
}

fn report_text(format: Format, report: &TableReport) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(&json!({
            "table": report.table,
            "matched": report.matched_count(),
            "total": report.rows.len(),
            "rows": report.rows,
        })),
        Format::Csv => Ok(csv(
            "label,expected,computed,matched,notes",
            report.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{}",
                    csv_field(&r.label),
                    csv_field(&r.expected),
                    csv_field(&r.computed),
                    r.matched,
                    csv_field(&r.notes.join("; "))
                )
            }),
        )),
    }
}

fn duadic_dump(cli: &Cli, p: u64, n: u32, exec: Exec) -> Result<(), CliError> {
    let tower = DuadicTower::new(p, n, exec)?;
    let pn = tower.pn();
    let factors: Vec<_> = tower
        .factors
        .iter()
        .map(|f| {
            let order = duadic::poly_order(&f.poly, pn)?;
            Ok(json!({
                "level": f.level, "half": f.half, "index": f.index, "degree": f.degree,
                "coset_min": f.coset[0], "hex": f.poly.to_hex(), "order": order,
            }))
        })
        .collect::<Result<_, DuadicError>>()?;
    let mut generators = Vec::new();
    for m in 1..=n {
        for which in [0u8, 1] {
            let g = tower.generator(m, which)?;
            if g != tower.generator_direct(m, which)? {
                return Err(CliError::Internal(format!("d_{m}{which} differs between routes")));
            }
            generators.push(json!({
                "m": m, "which": which, "degree": g.degree(), "hex": g.to_hex(),
                "order": duadic::poly_order(&g, pn)?,
            }));
        }
    }
    let identity = tower.factorization_product() == BitPoly::x_pow_minus_one(pn as usize);
    if !identity {
        return Err(CliError::Internal("factor product differs from x^(p^n) - 1".into()));
    }
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "p": p, "n": n, "g": tower.splitting.g,
            "extension_degree": tower.field.degree(),
            "extension_modulus": tower.field.modulus().to_hex(),
            "levels": tower.splitting.levels,
            "factors": factors,
            "generators": generators,
            "factorization_identity": identity,
            "distance_bound": duadic::duadic_distance_bound(p, n)?,
        }))?,
        Format::Csv => csv(
            "level,half,index,degree,coset_min,order,hex",
            factors.iter().map(|f| {
                format!(
                    "{},{},{},{},{},{},{}",
                    f["level"],
                    f["half"].as_u64().map_or(String::new(), |h| h.to_string()),
                    f["index"],
                    f["degree"],
                    f["coset_min"],
                    f["order"],
                    f["hex"].as_str().unwrap()
                )
            }),
        ),
    };
    emit(cli, &text)
}
