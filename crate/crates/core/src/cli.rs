//! Command-line front end. Every command reads JSON, writes one JSON report
//! (keys sorted, no timestamps) and maps errors to exit codes:
//! 2 for malformed input, 3 for an invalid characteristic matrix, 4 for an
//! internal criterion disagreement.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::charmatrix::{
    assemble, reduce_to_standard_form, to_factor_major, CharacteristicMatrix, MatrixJson, Polytope,
    StandardForm, StandardFormJson, Validity,
};
use crate::decision::{decide_matrix, parity_residues, sq2_criterion};
use crate::error::{Error, Result};
use crate::family::{
    fourth_power_zero_locus, generate_matrix, hkn_ring, indecomposability_witness, iso_invariants_with_bound,
    default_search_bound, FamilyParams,
};
use crate::intmat::IntMatrix;
use crate::polyring::{dj_relations, graded_rank, rank_table, socle_degree, Mod2Poly, PresentationJson, RingPresentation};

#[derive(Parser, Debug)]
#[command(name = "qtoric", version, about = "Loop-space commutativity and cohomology of quasitoric manifolds")]
pub struct Cli {
    /// `json` is the stable format; `text` is a short human summary.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check det = ±1 on every maximal simplex.
    Validate(InputArgs),
    /// Reduce a matrix over (Δ³)ⁿ to standard form.
    Normalize(InputArgs),
    /// Decide homotopy commutativity of the loop space.
    Decide(InputArgs),
    /// Cohomology relations q₁..qₙ.
    Cohomology {
        #[command(flatten)]
        input: InputArgs,
        /// Include the graded rank table up to the top degree.
        #[arg(long)]
        ranks: bool,
    },
    /// Sq² of each relation mod 2.
    Sq2(InputArgs),
    /// Graded rational ranks.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        /// A single even cohomological degree; default is the full table.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Emit the characteristic matrix B(k,n).
    FamilyGen(FamilyArgs),
    /// Decide H(k,n) ≅ H(l,n).
    FamilyIso {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Range |c| ≤ bound for the enumerated maps; default 3·max(k,l).
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Fourth-power-zero locus and indecomposability rank of H(k,n).
    FamilyInvariants {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
}

#[derive(Args, Debug, Clone)]
#[group(skip)]
#[command(group = clap::ArgGroup::new("source").required(true).multiple(false))]
pub struct InputArgs {
    /// Input file: a matrix, a standard form, a presentation, or a family
    /// descriptor.
    #[arg(long, group = "source")]
    pub matrix: Option<PathBuf>,
    /// Read the input from standard input.
    #[arg(long, group = "source")]
    pub stdin: bool,
    /// Inline input JSON.
    #[arg(long, group = "source")]
    pub json: Option<String>,
    /// Polytope JSON, required when the input is a bare array of rows.
    #[arg(long)]
    pub polytope: Option<String>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FamilyArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: usize,
}

/// What a command produced: the report and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value, text: String) -> Self {
        Outcome { report, text, code: 0 }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => format!("{}\n", self.text),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidMatrix { .. } => 3,
        Error::CriterionDisagreement(_) => 4,
        _ => 2,
    }
}

/// Parsed input of any accepted shape.
enum Input {
    Matrix(CharacteristicMatrix),
    Standard(StandardForm),
    Presentation(RingPresentation),
}

fn read_source(args: &InputArgs, stdin: &mut dyn Read) -> Result<String> {
    if let Some(path) = &args.matrix {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    } else if let Some(inline) = &args.json {
        Ok(inline.clone())
    } else {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    }
}

fn parse_input(args: &InputArgs, stdin: &mut dyn Read) -> Result<Input> {
    let text = read_source(args, stdin)?;
    let mut value: Value = serde_json::from_str(&text)?;
    let polytope: Option<Value> = args.polytope.as_deref().map(serde_json::from_str).transpose()?;

    if value.is_array() {
        let entries: IntMatrix = serde_json::from_value(value)?;
        let polytope = polytope.ok_or_else(|| Error::Parse("a bare matrix needs --polytope".into()))?;
        let polytope: Polytope = serde_json::from_value(polytope)?;
        return Ok(Input::Matrix(CharacteristicMatrix::new(entries, polytope)?));
    }
    let obj = value.as_object_mut().ok_or_else(|| Error::Parse("input must be a JSON object or array".into()))?;
    if obj.contains_key("relations") {
        let p: PresentationJson = serde_json::from_value(value)?;
        return Ok(Input::Presentation(p.try_into()?));
    }
    if obj.contains_key("blocks") {
        let sf: StandardFormJson = serde_json::from_value(value)?;
        return Ok(Input::Standard(sf.try_into()?));
    }
    if obj.contains_key("entries") {
        if let Some(p) = polytope {
            obj.insert("polytope".into(), p);
        }
        let entries = &obj["entries"];
        let rows = entries.as_array().map_or(0, Vec::len);
        let cols = entries.get(0).and_then(Value::as_array).map_or(0, Vec::len);
        obj.entry("n").or_insert(json!(rows));
        obj.entry("m").or_insert(json!(cols));
        let m: MatrixJson = serde_json::from_value(value)?;
        return Ok(Input::Matrix(m.try_into()?));
    }
    if obj.contains_key("k") {
        let p: FamilyParams = serde_json::from_value(value)?;
        return Ok(Input::Matrix(generate_matrix(p)));
    }
    Err(Error::Parse("unrecognized input: expected entries, blocks, relations, or k/n".into()))
}

fn require_matrix(input: Input) -> Result<CharacteristicMatrix> {
    match input {
        Input::Matrix(a) => Ok(a),
        Input::Standard(sf) => Ok(assemble(&sf)),
        Input::Presentation(_) => Err(Error::Parse("this command needs a characteristic matrix".into())),
    }
}

fn require_standard(input: Input) -> Result<StandardForm> {
    match input {
        Input::Standard(sf) => Ok(sf),
        other => {
            let a = require_matrix(other)?;
            let (a, _) = to_factor_major(&a)?;
            Ok(reduce_to_standard_form(&a)?.0)
        }
    }
}

fn require_presentation(input: Input) -> Result<RingPresentation> {
    match input {
        Input::Presentation(p) => Ok(p),
        other => Ok(dj_relations(&require_standard(other)?)),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn ranks_text(ranks: &[usize]) -> String {
    ranks.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Runs one command. Errors are returned for the caller to report and map
/// through [`exit_code`]; an invalid matrix under `validate` is a report
/// with status 3 instead.
pub fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Outcome> {
    match command {
        Command::Validate(args) => {
            let a = require_matrix(parse_input(args, stdin)?)?;
            Ok(match a.validate() {
                Validity::Valid(dets) => Outcome::ok(
                    json!({"valid": true, "determinants": to_value(&dets)}),
                    format!("valid: {} maximal simplices, all determinants ±1", dets.len()),
                ),
                Validity::Invalid(d) => Outcome {
                    text: format!("invalid: det {} at simplex {:?}", d.det.0, d.simplex),
                    report: json!({"valid": false, "simplex": d.simplex, "det": to_value(&d.det)}),
                    code: 3,
                },
            })
        }
        Command::Normalize(args) => {
            let a = require_matrix(parse_input(args, stdin)?)?;
            let (a, relabeling) = to_factor_major(&a)?;
            let (sf, moves) = reduce_to_standard_form(&a)?;
            let mut report = to_value(&sf.to_json());
            report["moves"] = to_value(&moves);
            if let Some(perm) = relabeling {
                report["relabeling"] = to_value(&perm);
            }
            Ok(Outcome::ok(report, format!("standard form with n = {}, {} moves", sf.n(), moves.len())))
        }
        Command::Decide(args) => {
            let a = require_matrix(parse_input(args, stdin)?)?;
            let r = decide_matrix(&a)?;
            let report = to_value(&r);
            let text = format!(
                "{} (stage {})",
                report["verdict"].as_str().unwrap_or_default(),
                report["stage"].as_str().unwrap_or_default()
            );
            Ok(Outcome::ok(report, text))
        }
        Command::Cohomology { input, ranks } => {
            let p = require_presentation(parse_input(input, stdin)?)?;
            let mut report = to_value(&p.to_json());
            let mut text: Vec<String> = p.relations().iter().map(|q| q.to_string()).collect();
            if *ranks {
                let table = rank_table(&p, socle_degree(&p))?;
                text.push(format!("ranks: {}", ranks_text(&table)));
                report["ranks"] = to_value(&table);
            }
            Ok(Outcome::ok(report, text.join("\n")))
        }
        Command::Sq2(args) => {
            let sf = require_standard(parse_input(args, stdin)?)?;
            let c = sq2_criterion(&sf)?;
            let report = json!({
                "squares": c.squares.iter().map(Mod2Poly::to_json).collect::<Vec<_>>(),
                "all_zero": c.all_zero,
                "residues": parity_residues(&sf),
            });
            let text = c
                .squares
                .iter()
                .enumerate()
                .map(|(i, s)| format!("Sq2 q{} = {s}", i + 1))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok(report, text))
        }
        Command::Rank { input, degree } => {
            let p = require_presentation(parse_input(input, stdin)?)?;
            match degree {
                Some(d) => {
                    let r = graded_rank(&p, *d)?;
                    Ok(Outcome::ok(json!({"degree": d, "rank": r}), format!("rank in degree {d}: {r}")))
                }
                None => {
                    let table = rank_table(&p, socle_degree(&p))?;
                    let total: usize = table.iter().sum();
                    Ok(Outcome::ok(
                        json!({"ranks": table, "total": total}),
                        format!("ranks: {} (total {total})", ranks_text(&table)),
                    ))
                }
            }
        }
        Command::FamilyGen(f) => {
            let a = generate_matrix(FamilyParams::new(f.k, f.n)?);
            Ok(Outcome::ok(to_value(&a.to_json()), a.entries().to_string()))
        }
        Command::FamilyIso { k, l, n, bound } => {
            let bound = bound.unwrap_or_else(|| default_search_bound(*k, *l));
            let r = iso_invariants_with_bound(*k, *l, *n, bound)?;
            let mut report = to_value(&r);
            report["restricted"]["methods"] = json!({"witnesses": "box_search", "exact": "proof_shaped"});
            let verdict = if r.isomorphic { "isomorphic" } else { "not isomorphic" };
            Ok(Outcome::ok(report, format!("H({k},{n}) and H({l},{n}): {verdict}")))
        }
        Command::FamilyInvariants { family, bound } => {
            let p = FamilyParams::new(family.k, family.n)?;
            let ring = hkn_ring(p);
            let locus = fourth_power_zero_locus(&ring.rewrite, *bound)?;
            let witness = indecomposability_witness(&ring.rewrite, *bound)?;
            let mut locus_value = to_value(&locus);
            locus_value["method"] = json!(locus.method());
            let report = json!({
                "family": to_value(&p),
                "fourth_power_locus": locus_value,
                "indecomposability": to_value(&witness),
            });
            let lines = locus
                .proof_lines
                .as_ref()
                .map(|l| l.iter().map(|i| format!("Z*t{i}")).collect::<Vec<_>>().join(" ∪ "))
                .unwrap_or_else(|| format!("{} solutions in the box", locus.box_solutions.len()));
            Ok(Outcome::ok(
                report,
                format!("x^4 = 0 locus: {lines} ({}); rank {}", locus.method(), witness.rank),
            ))
        }
    }
}

/// Entry point for the binary; returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let outcome = match execute(&cli.command, &mut std::io::stdin()) {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            let report = json!({"error": e.to_string(), "status": code});
            match cli.format {
                Format::Json => eprintln!("{}", serde_json::to_string_pretty(&report).expect("serializes")),
                Format::Text => eprintln!("error: {e}"),
            }
            return code;
        }
    };
    let rendered = outcome.render(cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{rendered}"),
    }
    outcome.code
}
