//! The `iwr` command-line tool.
//!
//! Output goes to stdout as JSON (default) or CSV; diagnostics go to stderr.
//! Exit codes: 0 on success, 2 on invalid input, 3 when the determinant
//! admits no IWR lattice.

pub mod record;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classes::{classify_gram, GramMatrix, IwrLattice, SimilarityClass};
use crate::conic::compose;
use crate::enumerate::{count, enumerate_iwr, DeterminantSpec};
use crate::optimize::{optimize, table1, trivial_bound};
use crate::zeta::{epstein_lattice, packing_density, snr};
use crate::{Error, Result};

use record::{ClassRecord, JsonInt, LatticeRecord, LATTICE_COLUMNS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "iwr", version, about = "Planar integral well-rounded lattices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Similarity class and scale of an integral Gram matrix [[a, b], [b, c]].
    Classify {
        #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
        gram: String,
    },
    /// All IWR lattices of determinant M·√D.
    Enumerate {
        #[arg(long = "M")]
        m: BigInt,
        #[arg(long = "D")]
        d: BigInt,
        /// Also list the square lattice √M·ℤ² (D = 1 only).
        #[arg(long)]
        include_square_class: bool,
    },
    /// Per-divisor counts f, f1, f2 and the cardinality bound.
    Count {
        #[arg(long = "M")]
        m: BigInt,
        #[arg(long = "D")]
        d: BigInt,
    },
    /// The IWR lattice of determinant M·√D with the largest minimum.
    Optimize {
        #[arg(long = "M")]
        m: BigInt,
        #[arg(long = "D")]
        d: BigInt,
    },
    /// Epstein zeta value E(s) of √(k/q)·Ω_D(p, q).
    Zeta {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
        #[arg(long = "D")]
        d: BigInt,
        #[arg(long, default_value = "1")]
        k: BigInt,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Signal-to-noise ratio and packing density of √(k/q)·Ω_D(p, q).
    Snr {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
        #[arg(long = "D")]
        d: BigInt,
        #[arg(long, default_value = "1")]
        k: BigInt,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Composition of two classes of type D on the Pell conic.
    Compose {
        #[arg(long = "D")]
        d: BigInt,
        #[arg(long, value_name = "p,q")]
        c1: String,
        #[arg(long, value_name = "p,q")]
        c2: String,
    },
    /// Recomputes the published table of maximizers.
    Table1,
}

/// Runs the tool on `std::env::args_os()`-style arguments, printing to the
/// process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_out = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let _ = if to_out {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if to_out { EXIT_OK } else { EXIT_INVALID };
        }
    };
    match execute(&cli, out) {
        Ok(code) => {
            if code == EXIT_EMPTY {
                let _ = writeln!(err, "iwr: no IWR lattice has this determinant");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "iwr: {e}");
            match e {
                Error::InadmissibleDeterminant { .. } => EXIT_EMPTY,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("cannot write output: {e}"))
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io_err)?;
    writeln!(out).map_err(io_err)
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn write_lattice(format: Format, out: &mut dyn Write, record: &LatticeRecord) -> Result<()> {
    match format {
        Format::Json => write_json(out, record),
        Format::Csv => write_csv(out, &LATTICE_COLUMNS, &[record.csv_row()]),
    }
}

fn write_lattices(format: Format, out: &mut dyn Write, records: &[LatticeRecord]) -> Result<()> {
    match format {
        Format::Json => write_json(out, &records),
        Format::Csv => {
            let rows: Vec<_> = records.iter().map(LatticeRecord::csv_row).collect();
            write_csv(out, &LATTICE_COLUMNS, &rows)
        }
    }
}

fn parse_pair(text: &str) -> Result<(BigInt, BigInt)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
    };
    match parts.as_slice() {
        [p, q] => Ok((parse(p)?, parse(q)?)),
        _ => Err(Error::InvalidInput(format!("expected p,q, got {text:?}"))),
    }
}

fn lattice_from_pqdk(p: &BigInt, q: &BigInt, d: &BigInt, k: &BigInt) -> Result<IwrLattice> {
    let class = SimilarityClass::from_pqd(p.clone(), q.clone(), d.clone())?;
    IwrLattice::new(class, k.clone())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    match &cli.command {
        Command::Classify { gram } => {
            let g: GramMatrix = gram.parse()?;
            let (class, k) = classify_gram(&g)?;
            let rec = LatticeRecord::from(&IwrLattice::new(class, k)?);
            write_lattice(format, out, &rec)?;
        }
        Command::Enumerate {
            m,
            d,
            include_square_class,
        } => {
            let spec = DeterminantSpec::new(m.clone(), d.clone())?;
            let list = enumerate_iwr(&spec, *include_square_class)?;
            let records: Vec<_> = list.iter().map(LatticeRecord::from).collect();
            write_lattices(format, out, &records)?;
            if records.is_empty() {
                return Ok(EXIT_EMPTY);
            }
        }
        Command::Count { m, d } => {
            let spec = DeterminantSpec::new(m.clone(), d.clone())?;
            let report = count(&spec)?;
            match format {
                Format::Json => {
                    let rows: Vec<Value> = report
                        .rows
                        .iter()
                        .map(|row| json!({"r": JsonInt::from(&row.r), "f": row.f, "f1": row.f1, "f2": row.f2}))
                        .collect();
                    write_json(
                        out,
                        &json!({
                            "M": JsonInt::from(spec.m()),
                            "D": JsonInt::from(spec.d()),
                            "rows": rows,
                            "total": report.total,
                            "total_with_square_class": report.total_with_square_class,
                            "bound": report.bound.to_string(),
                            "diagnostic": report.diagnostic,
                        }),
                    )?;
                }
                Format::Csv => {
                    let rows: Vec<_> = report
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                spec.m().to_string(),
                                spec.d().to_string(),
                                row.r.to_string(),
                                row.f.to_string(),
                                row.f1.to_string(),
                                row.f2.to_string(),
                            ]
                        })
                        .collect();
                    write_csv(out, &["M", "D", "r", "f", "f1", "f2"], &rows)?;
                }
            }
        }
        Command::Optimize { m, d } => {
            let spec = DeterminantSpec::new(m.clone(), d.clone())?;
            let opt = optimize(&spec)?;
            let lat = &opt.lattice;
            let rec = LatticeRecord::from(lat);
            let scale = format!("{}/{}", lat.k(), lat.class().q());
            match format {
                Format::Json => {
                    let maximizers: Vec<ClassRecord> =
                        opt.maximizers.iter().map(ClassRecord::from).collect();
                    write_json(
                        out,
                        &json!({
                            "min_norm": JsonInt(lat.minimum()),
                            "class": ClassRecord::from(lat.class()),
                            "k": JsonInt::from(lat.k()),
                            "scale_sq": scale,
                            "lattice": rec,
                            "maximizers": maximizers,
                            "trivial_bound": trivial_bound(&spec).value,
                        }),
                    )?;
                }
                Format::Csv => {
                    let mut header = LATTICE_COLUMNS.to_vec();
                    header.push("scale_sq");
                    let mut row = rec.csv_row();
                    row.push(scale);
                    write_csv(out, &header, &[row])?;
                }
            }
        }
        Command::Zeta { p, q, d, k, s, eps } => {
            let lat = lattice_from_pqdk(p, q, d, k)?;
            let z = epstein_lattice(&lat, *s, *eps)?;
            match format {
                Format::Json => write_json(
                    out,
                    &json!({
                        "value": z.value,
                        "abs_error_bound": z.abs_error_bound,
                        "truncation_radius": z.truncation_radius,
                        "s": z.s,
                        "T": z.t,
                        "Delta": z.delta,
                        "lattice": LatticeRecord::from(&lat),
                    }),
                )?,
                Format::Csv => write_csv(
                    out,
                    &["value", "abs_error_bound", "truncation_radius", "s", "T", "Delta"],
                    &[vec![
                        z.value.to_string(),
                        z.abs_error_bound.to_string(),
                        z.truncation_radius.to_string(),
                        z.s.to_string(),
                        z.t.to_string(),
                        z.delta.to_string(),
                    ]],
                )?,
            }
        }
        Command::Snr { p, q, d, k, eps } => {
            let lat = lattice_from_pqdk(p, q, d, k)?;
            let rec = LatticeRecord {
                snr_db: Some(snr(&lat, *eps)?),
                packing_density: Some(packing_density(&lat)),
                ..LatticeRecord::from(&lat)
            };
            write_lattice(format, out, &rec)?;
        }
        Command::Compose { d, c1, c2 } => {
            let (p1, q1) = parse_pair(c1)?;
            let (p2, q2) = parse_pair(c2)?;
            let a = SimilarityClass::from_pqd(p1, q1, d.clone())?;
            let b = SimilarityClass::from_pqd(p2, q2, d.clone())?;
            let c = compose(&a, &b)?;
            let cos = format!("{}/{}", c.p(), c.q());
            match format {
                Format::Json => {
                    let mut value = serde_json::to_value(ClassRecord::from(&c)).map_err(io_err)?;
                    value["cos_theta"] = Value::String(cos);
                    write_json(out, &value)?;
                }
                Format::Csv => write_csv(
                    out,
                    &["p", "r", "q", "D", "cos_theta"],
                    &[vec![
                        c.p().to_string(),
                        c.r().to_string(),
                        c.q().to_string(),
                        c.d().to_string(),
                        cos,
                    ]],
                )?,
            }
        }
        Command::Table1 => write_table1(format, out)?,
    }
    Ok(EXIT_OK)
}

const TABLE1_COLUMNS: [&str; 14] = [
    "Delta",
    "M",
    "D",
    "min_norm",
    "p",
    "r",
    "q",
    "k",
    "scale_sq",
    "published_min_norm",
    "published_p",
    "published_q",
    "published_scale_sq",
    "discrepancy",
];

fn write_table1(format: Format, out: &mut dyn Write) -> Result<()> {
    let rows = table1()?;
    match format {
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let lat = &row.optimum.lattice;
                    let pub_ = &row.published;
                    let mut v = json!({
                        "Delta": format!("{}*sqrt({})", pub_.m, pub_.d),
                        "min_norm": JsonInt(lat.minimum()),
                        "scale_sq": format!("{}/{}", lat.k(), lat.class().q()),
                        "lattice": LatticeRecord::from(lat),
                        "published": {
                            "min_norm": pub_.min_norm,
                            "p": pub_.class_pq.0,
                            "q": pub_.class_pq.1,
                            "scale_sq": format!("{}/{}", pub_.scale.0, pub_.scale.1),
                        },
                    });
                    if let Some(flag) = row.discrepancy {
                        v["discrepancy"] = Value::String(flag.to_string());
                    }
                    v
                })
                .collect();
            write_json(out, &values)
        }
        Format::Csv => {
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    let lat = &row.optimum.lattice;
                    let c = lat.class();
                    let pub_ = &row.published;
                    vec![
                        format!("{}*sqrt({})", pub_.m, pub_.d),
                        pub_.m.to_string(),
                        pub_.d.to_string(),
                        lat.minimum().to_string(),
                        c.p().to_string(),
                        c.r().to_string(),
                        c.q().to_string(),
                        lat.k().to_string(),
                        format!("{}/{}", lat.k(), c.q()),
                        pub_.min_norm.to_string(),
                        pub_.class_pq.0.to_string(),
                        pub_.class_pq.1.to_string(),
                        format!("{}/{}", pub_.scale.0, pub_.scale.1),
                        row.discrepancy.unwrap_or("").to_string(),
                    ]
                })
                .collect();
            write_csv(out, &TABLE1_COLUMNS, &csv_rows)
        }
    }
}
