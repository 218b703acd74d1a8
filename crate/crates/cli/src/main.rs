use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use wafa_core::io::{parse_word, Document, Hom};
use wafa_core::poly_automata::{
    pa_equivalence, pa_to_wafa, pa_zeroness, wafa_to_pa, Pa, Verdict, ZeronessReport,
    DEFAULT_BUDGET,
};
use wafa_core::transforms::{
    nivat_decompose, nivat_recompose, nivat_wafa_decompose, wafa_inverse_word_hom, wafa_to_wfta,
    wfta_hom_to_wafa,
};
use wafa_core::trees::{enumerate_trees, word_tree};
use wafa_core::wafa::{RunTree, Wafa, DEFAULT_RUN_CAP};
use wafa_core::wfta::{preimages, Wfta};
use wafa_core::words::{all_words, display_word, reversed, Word};
use wafa_core::{Error, Semiring, Term, Value};

mod dot;

#[derive(Parser)]
#[command(name = "wafa", version, about = "Weighted alternating, tree and polynomial automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an automaton on a word or a tree.
    Eval {
        file: PathBuf,
        /// A word (letters, optionally space separated) or a tree such as `a(#,#)`.
        input: String,
    },
    /// List the runs of a word automaton on a word.
    Runs {
        file: PathBuf,
        word: String,
        #[arg(long, default_value_t = DEFAULT_RUN_CAP, value_parser = positive_usize)]
        cap: usize,
        /// Append one Graphviz diagram per run.
        #[arg(long)]
        dot: bool,
    },
    /// Translate a document into another model or normal form.
    Convert(ConvertArgs),
    /// Decide zeroness of one, or equivalence of two, rational automata.
    Decide {
        #[arg(long, conflicts_with = "equiv", required_unless_present = "equiv")]
        zeroness: bool,
        #[arg(long)]
        equiv: bool,
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = positive_u64)]
        budget: u64,
    },
    /// Parse a document and report its shape.
    Validate { file: PathBuf },
}

#[derive(Args)]
struct ConvertArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    to: Target,
    /// Homomorphism document used by `--to wafa` and `--to step`.
    #[arg(long)]
    hom: Option<PathBuf>,
    /// Maximal word length (or a bound on tree size) for the behavior check.
    #[arg(long, default_value_t = 3)]
    verify_depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Wfta,
    Wafa,
    Pa,
    Nivat,
    Nice,
    Equalized,
    PurelyPolynomial,
    Step,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err("expected a positive integer".into()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err("expected a positive integer".into()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn verification(message: String) -> Self {
        Failure { code: 4, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::ResourceLimit(_) => 5,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Eval { file, input } => cmd_eval(&file, &input, &mut out),
        Command::Runs {
            file,
            word,
            cap,
            dot,
        } => cmd_runs(&file, &word, cap, dot, &mut out),
        Command::Convert(args) => cmd_convert(&args, &mut out),
        Command::Decide {
            zeroness,
            files,
            budget,
            ..
        } => cmd_decide(zeroness, &files, budget, &mut out),
        Command::Validate { file } => cmd_validate(&file, &mut out),
    };
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Document::parse(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("JSON values serialize");
    s.push('\n');
    s
}

// ---- eval ----

fn cmd_eval(file: &Path, input: &str, out: &mut String) -> Outcome {
    let text = match load(file)? {
        Document::Wafa(a) => {
            let w = parse_word(a.alphabet(), input)?;
            a.ring().format_value(&a.behavior(&w)?)
        }
        Document::Pa(p) => {
            let w = parse_word(p.alphabet(), input)?;
            p.ring().format_value(&p.behavior(&w)?)
        }
        Document::Wfta(b) => b.ring().format_value(&b.behavior(&parse_tree(input)?)?),
        Document::Step(s) => s.ring().format_value(&s.eval(&parse_tree(input)?)?),
        Document::Nivat(d) => {
            let b = nivat_recompose(&d)?;
            b.ring().format_value(&b.behavior(&parse_tree(input)?)?)
        }
        Document::Hom(Hom::Word(h)) => display_word(&h.apply(&parse_word(h.source(), input)?)?),
        Document::Hom(Hom::Tree(h)) => h.apply(&parse_tree(input)?)?.to_string(),
        Document::Hom(Hom::WordToTree(h)) => h.apply(&parse_word(h.alphabet(), input)?)?.to_string(),
    };
    out.push_str(&text);
    out.push('\n');
    Ok(())
}

fn parse_tree(input: &str) -> Result<Term, Failure> {
    Ok(Term::parse(input)?)
}

// ---- runs ----

fn cmd_runs(file: &Path, word: &str, cap: usize, with_dot: bool, out: &mut String) -> Outcome {
    let Document::Wafa(mut a) = load(file)? else {
        return Err(Failure {
            code: 3,
            message: "runs are defined for wafa documents".into(),
        });
    };
    if !a.is_nice() {
        eprintln!("note: the automaton is not nice; listing the runs of its nice form");
        a = a.make_nice()?;
    }
    let w = parse_word(a.alphabet(), word)?;
    let ring = a.ring().clone();
    let mut runs: Vec<RunTree> = Vec::new();
    let mut overflow = None;
    for run in a.runs(&w, cap)? {
        match run {
            Ok(r) => runs.push(r),
            Err(e @ Error::ResourceLimit(_)) => {
                overflow = Some(e);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut total = ring.zero();
    match overflow {
        None => out.push_str(&format!("runs: {}\n", runs.len())),
        Some(_) => out.push_str(&format!("runs: more than {cap} (partial listing)\n")),
    }
    for (i, r) in runs.iter().enumerate() {
        let weight = r.weight(&ring)?;
        total = ring.add(&total, &weight)?;
        out.push_str(&format!("run {}: weight {}\n", i + 1, ring.format_value(&weight)));
        indent_run(&a, r, 1, out);
    }
    match overflow {
        None => out.push_str(&format!("sum: {}\n", ring.format_value(&total))),
        Some(_) => out.push_str(&format!("partial sum: {}\n", ring.format_value(&total))),
    }
    if with_dot {
        for (i, r) in runs.iter().enumerate() {
            out.push_str(&dot::run_dot(&a, r, &format!("run {}", i + 1)));
        }
    }
    match overflow {
        None => Ok(()),
        Some(e) => Err(e.into()),
    }
}

fn indent_run(a: &Wafa, r: &RunTree, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&r.label.name(a));
    out.push('\n');
    for c in &r.children {
        indent_run(a, c, depth + 1, out);
    }
}

// ---- convert ----

fn cmd_convert(args: &ConvertArgs, out: &mut String) -> Outcome {
    let source = load(&args.file)?;
    let hom = args.hom.as_deref().map(load).transpose()?;
    let hom = match hom {
        Some(Document::Hom(h)) => Some(h),
        Some(other) => {
            return Err(Failure {
                code: 2,
                message: format!("--hom expects a hom document, found {}", other.kind()),
            })
        }
        None => None,
    };
    let d = args.verify_depth;
    let result = match (args.to, source, hom) {
        (Target::Wfta, Document::Wafa(a), None) => {
            let tr = wafa_to_wfta(&a)?;
            check_words(a.ring(), a.alphabet(), d, |w| {
                Ok((a.behavior(w)?, tr.wfta.behavior(&word_tree(a.alphabet(), &w.to_vec(), tr.rank)?)?))
            })?;
            Document::Wfta(tr.wfta)
        }
        (Target::Wfta, Document::Nivat(n), None) => {
            let b = nivat_recompose(&n)?;
            check_trees(&b, d, |t| {
                let mut sum = b.ring().zero();
                for t2 in preimages(&n.h, t)? {
                    let v = b.ring().mul(&n.aw.behavior(&t2)?, &boolean_weight(b.ring(), &n.l, &t2)?)?;
                    sum = b.ring().add(&sum, &v)?;
                }
                Ok((sum, b.behavior(t)?))
            })?;
            Document::Wfta(b)
        }
        (Target::Wafa, Document::Wafa(a), None) => Document::Wafa(a),
        (Target::Wafa, Document::Pa(p), None) => {
            let a = pa_to_wafa(&p)?;
            check_words(a.ring(), a.alphabet(), d, |w| Ok((p.behavior(&reversed(w))?, a.behavior(w)?)))?;
            Document::Wafa(a)
        }
        (Target::Wafa, Document::Wfta(b), Some(Hom::WordToTree(h))) => {
            let a = wfta_hom_to_wafa(&b, &h)?;
            check_words(a.ring(), a.alphabet(), d, |w| Ok((b.behavior(&h.apply(w)?)?, a.behavior(w)?)))?;
            Document::Wafa(a)
        }
        (Target::Wafa, Document::Wafa(a), Some(Hom::Word(h))) => {
            let c = wafa_inverse_word_hom(&a, &h)?;
            check_words(c.ring(), c.alphabet(), d, |v| Ok((a.behavior(&h.apply(v)?)?, c.behavior(v)?)))?;
            Document::Wafa(c)
        }
        (Target::Pa, Document::Wafa(a), None) => {
            let p = wafa_to_pa(&a)?;
            check_words(a.ring(), a.alphabet(), d, |w| Ok((a.behavior(w)?, p.behavior(&reversed(w))?)))?;
            Document::Pa(p)
        }
        (Target::Nivat, Document::Wfta(b), None) => {
            let n = nivat_decompose(&b)?;
            let c = nivat_recompose(&n)?;
            check_trees(&b, 2 * d + 1, |t| Ok((b.behavior(t)?, c.behavior(t)?)))?;
            Document::Nivat(n)
        }
        (Target::Nivat, Document::Wafa(a), None) => {
            let (r, n) = nivat_wafa_decompose(&a)?;
            let c = nivat_recompose(&n)?;
            check_words(a.ring(), a.alphabet(), d, |w| {
                Ok((a.behavior(w)?, c.behavior(&word_tree(a.alphabet(), &w.to_vec(), r)?)?))
            })?;
            Document::Nivat(n)
        }
        (Target::Nice, Document::Wafa(a), None) => normal_form(&a, d, Wafa::make_nice)?,
        (Target::Equalized, Document::Wafa(a), None) => normal_form(&a, d, Wafa::equalize)?,
        (Target::PurelyPolynomial, Document::Wafa(a), None) => {
            normal_form(&a, d, Wafa::make_purely_polynomial)?
        }
        (Target::Step, Document::Step(s), Some(Hom::Tree(h))) => {
            let t = s.inverse_hom(&h)?;
            for tree in enumerate_trees(h.source(), 2 * d) {
                let (x, y) = (s.eval(&h.apply(&tree)?)?, t.eval(&tree)?);
                if x != y {
                    return Err(mismatch(&tree.to_string(), s.ring(), &x, &y));
                }
            }
            Document::Step(t)
        }
        (to, source, hom) => {
            let to = to.to_possible_value().expect("targets have names").get_name().to_string();
            let with = match hom {
                Some(_) => " with a homomorphism of that type",
                None if matches!(to.as_str(), "wafa" | "step") && source.kind() != "pa" => {
                    " without --hom"
                }
                None => "",
            };
            return Err(Failure {
                code: 3,
                message: format!("cannot convert a {} document to {to}{with}", source.kind()),
            });
        }
    };
    match args.format {
        Format::Json => {
            let mut s = result.to_string_pretty();
            s.push('\n');
            emit(args.output.as_deref(), s, out)
        }
        Format::Dot => match &result {
            Document::Wafa(a) => emit(args.output.as_deref(), dot::wafa_dot(a), out),
            other => Err(Failure {
                code: 3,
                message: format!("DOT output is available for wafa documents, not {}", other.kind()),
            }),
        },
    }
}

fn normal_form(a: &Wafa, d: usize, f: fn(&Wafa) -> wafa_core::Result<Wafa>) -> Result<Document, Failure> {
    let b = f(a).map_err(|e| match e {
        Error::NotNice(_) => Failure {
            code: 3,
            message: "the input is not nice; convert it with --to nice first".into(),
        },
        e => e.into(),
    })?;
    check_words(a.ring(), a.alphabet(), d, |w| Ok((a.behavior(w)?, b.behavior(w)?)))?;
    Ok(Document::Wafa(b))
}

fn boolean_weight(ring: &Semiring, l: &Wfta, t: &Term) -> wafa_core::Result<Value> {
    Ok(if l.behavior(t)?.is_zero() {
        ring.zero()
    } else {
        ring.one()
    })
}

fn mismatch(input: &str, ring: &Semiring, expected: &Value, found: &Value) -> Failure {
    Failure::verification(format!(
        "verification failed on {input}: expected {}, got {}",
        ring.format_value(expected),
        ring.format_value(found)
    ))
}

/// Compares `(source, converted)` behaviors on all words up to length `d`.
fn check_words(
    ring: &Semiring,
    alphabet: &[String],
    d: usize,
    pair: impl Fn(&[String]) -> wafa_core::Result<(Value, Value)>,
) -> Outcome {
    for w in all_words(alphabet, d) {
        let (x, y) = pair(&w)?;
        if x != y {
            let shown = if w.is_empty() { "ε".to_string() } else { display_word(&w) };
            return Err(mismatch(&shown, ring, &x, &y));
        }
    }
    Ok(())
}

fn check_trees(
    b: &Wfta,
    max_nodes: usize,
    pair: impl Fn(&Term) -> wafa_core::Result<(Value, Value)>,
) -> Outcome {
    for t in enumerate_trees(b.alphabet(), max_nodes) {
        let (x, y) = pair(&t)?;
        if x != y {
            return Err(mismatch(&t.to_string(), b.ring(), &x, &y));
        }
    }
    Ok(())
}

fn emit(path: Option<&Path>, text: String, out: &mut String) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 3,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            out.push_str(&text);
            Ok(())
        }
    }
}

// ---- decide ----

fn as_pa(doc: Document, path: &Path) -> Result<Pa, Failure> {
    match doc {
        Document::Wafa(a) => Ok(wafa_to_pa(&a)?),
        Document::Pa(p) => Ok(p),
        other => Err(Failure {
            code: 3,
            message: format!("{}: expected a wafa or pa document, found {}", path.display(), other.kind()),
        }),
    }
}

fn cmd_decide(zeroness: bool, files: &[PathBuf], budget: u64, out: &mut String) -> Outcome {
    let expected = if zeroness { 1 } else { 2 };
    if files.len() != expected {
        return Err(Failure {
            code: 2,
            message: format!("expected {expected} input file(s), got {}", files.len()),
        });
    }
    // Word automata are decided through their reversed polynomial automata,
    // so witnesses are reversed back for them.
    let is_word_automaton = |d: &Document| matches!(d, Document::Wafa(_));
    let first = load(&files[0])?;
    let reverse = is_word_automaton(&first);
    let a = as_pa(first, &files[0])?;
    let report = if zeroness {
        pa_zeroness(&a, budget)?
    } else {
        let second = load(&files[1])?;
        if is_word_automaton(&second) != reverse {
            return Err(Failure {
                code: 3,
                message: "compare a wafa with a wafa, or a pa with a pa".into(),
            });
        }
        let b = as_pa(second, &files[1])?;
        pa_equivalence(&a, &b, budget)?
    };
    out.push_str(&pretty(&verdict_json(&report, a.ring(), zeroness, reverse)));
    match report.verdict {
        Verdict::Unknown => Err(Failure {
            code: 5,
            message: format!("budget of {budget} steps exhausted"),
        }),
        _ => Ok(()),
    }
}

fn verdict_json(r: &ZeronessReport, ring: &Semiring, zeroness: bool, reverse: bool) -> Json {
    let (result, witness) = match &r.verdict {
        Verdict::Zero => (if zeroness { "zero" } else { "equivalent" }, None),
        Verdict::NonZero { witness, value } => {
            let w: Word = if reverse { reversed(witness) } else { witness.clone() };
            (
                if zeroness { "nonzero" } else { "inequivalent" },
                Some((w, ring.format_value(value))),
            )
        }
        Verdict::Unknown => ("unknown", None),
    };
    let mut j = json!({ "result": result });
    if let Some((w, v)) = witness {
        j["witness"] = json!(w);
        j[if zeroness { "value" } else { "difference" }] = json!(v);
    }
    j["basis_size"] = json!(r.basis_size);
    j["chain_depth"] = json!(r.chain_depth);
    j["steps"] = json!(r.steps);
    j
}

// ---- validate ----

fn cmd_validate(file: &Path, out: &mut String) -> Outcome {
    let doc = load(file)?;
    let mut j = json!({ "kind": doc.kind() });
    match &doc {
        Document::Wafa(a) => {
            let d = a.diagnostics();
            j["ring"] = json!(a.ring().to_string());
            j["states"] = json!(a.num_states());
            j["letters"] = json!(a.alphabet().len());
            j["normalized"] = json!(d.normalized);
            j["no_constants"] = json!(d.no_constants);
            j["initial_is_first_state"] = json!(d.initial_is_first_state);
            j["nice"] = json!(d.nice);
            j["purely_polynomial"] = json!(d.purely_polynomial);
            j["equalized"] = json!(d.equalized);
            j["universal"] = json!(d.universal);
            j["wfa_shape"] = json!(d.wfa_shape);
            j["violations"] = json!(d.violations);
        }
        Document::Wfta(b) => {
            j["ring"] = json!(b.ring().to_string());
            j["states"] = json!(b.num_states());
            j["symbols"] = json!(b.alphabet().len());
            j["max_rank"] = json!(b.alphabet().max_rank());
            j["transitions"] = json!(b.num_transitions());
        }
        Document::Pa(p) => {
            j["ring"] = json!(p.ring().to_string());
            j["registers"] = json!(p.num_registers());
            j["letters"] = json!(p.alphabet().len());
            j["decidable"] = json!(p.ring() == &Semiring::Rational);
        }
        Document::Hom(Hom::Word(h)) => {
            j["type"] = json!("word");
            j["non_deleting"] = json!(h.is_non_deleting());
        }
        Document::Hom(Hom::Tree(h)) => {
            j["type"] = json!("tree");
            j["linear_non_deleting"] = json!(h.is_linear_non_deleting());
        }
        Document::Hom(Hom::WordToTree(h)) => {
            j["type"] = json!("word-to-tree");
            j["letters"] = json!(h.alphabet().len());
        }
        Document::Step(s) => {
            j["ring"] = json!(s.ring().to_string());
            j["parts"] = json!(s.parts().len());
        }
        Document::Nivat(n) => {
            j["symbols"] = json!(n.alphabet.len());
            j["run_language_states"] = json!(n.l.num_states());
            j["weight_states"] = json!(n.aw.num_states());
        }
    }
    out.push_str(&pretty(&j));
    Ok(())
}
