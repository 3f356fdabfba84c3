use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use braidtwist::mutation_iso::{kappa_permutation, theta_flat, theta_sharp};
use braidtwist::presentations::{
    abelianization, br_qp, br_qp_simple, bt, eps_delta_change, rho, sbg, sbg_alt, ChangeDirection, DecoratedSurface,
    Presentation,
};
use braidtwist::qp::{mutate, validate_surface_qp, Qp};
use braidtwist::surface::{
    canonical_triangulation, flip, qp_from_triangulation, validate_triangulation, DecoratedTriangulation,
    FlipDirection, SurfaceSignature,
};
use braidtwist::verifier::perm::standard_assignment;
use braidtwist::verifier::script::{check_corpus, load_scripts, Library};
use braidtwist::verifier::search::{named_relators, prove_trivial, SearchConfig};
use braidtwist::verifier::{
    artin_action, check_permutation_quotient, check_relators_via_artin, word_equal_bounded, Verdict,
};
use braidtwist::word::{GenSym, Letter, Substitution, Word};

const DEFAULT_SEED: u64 = 20240917;

#[derive(Parser)]
#[command(
    name = "braidtwist",
    version,
    about = "Quivers, triangulations and braid twist presentations"
)]
struct Cli {
    /// Print results and errors as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decorated triangulations
    Surf {
        #[command(subcommand)]
        cmd: SurfCmd,
    },
    /// Quivers with potential
    Qp {
        #[command(subcommand)]
        cmd: QpCmd,
    },
    /// Emit a presentation
    Present {
        #[command(subcommand)]
        cmd: PresentCmd,
    },
    /// Emit a generator map
    Map {
        #[command(subcommand)]
        cmd: MapCmd,
    },
    /// Run a check
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum SurfCmd {
    /// Counts and diagnostics for a triangulation file
    Validate { file: Option<PathBuf> },
    /// Flip an arc
    Flip {
        file: Option<PathBuf>,
        #[arg(long)]
        arc: String,
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirArg,
    },
    /// The canonical triangulation of a signature, or a file in canonical form
    Canonical {
        file: Option<PathBuf>,
        #[arg(long)]
        genus: Option<u32>,
        /// marked points per boundary component, e.g. `2,1`
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    Forward,
    Backward,
}

#[derive(Subcommand)]
enum QpCmd {
    /// The QP of a triangulation file
    Build { file: Option<PathBuf> },
    /// Mutate at a vertex
    Mutate {
        file: Option<PathBuf>,
        #[arg(long)]
        at: String,
        /// skip the surface-type check; the result then carries no guarantee
        #[arg(long)]
        unchecked: bool,
    },
    /// Surface-type diagnostics
    Validate { file: Option<PathBuf> },
}

#[derive(Args, Clone, Copy)]
struct SurfaceArgs {
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// number of boundary components
    #[arg(long, default_value_t = 1)]
    boundary: u32,
    #[arg(long)]
    decorations: u32,
}

impl SurfaceArgs {
    fn surface(&self) -> Result<DecoratedSurface, CliError> {
        DecoratedSurface::new(self.genus, self.boundary, self.decorations).map_err(input)
    }
}

#[derive(Subcommand)]
enum PresentCmd {
    Sbg(SurfaceArgs),
    SbgAlt(SurfaceArgs),
    Bt(SurfaceArgs),
    /// from a QP file
    BrQp {
        file: Option<PathBuf>,
    },
    /// from a QP file
    BrQpSimple {
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChangeArg {
    EpsToDelta,
    DeltaToEps,
}

#[derive(Subcommand)]
enum MapCmd {
    ThetaFlat {
        file: Option<PathBuf>,
        #[arg(long)]
        at: String,
    },
    /// from the mutated QP
    ThetaSharp {
        file: Option<PathBuf>,
        #[arg(long)]
        at: String,
    },
    Rho {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i32,
    },
    EpsDelta {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum)]
        direction: ChangeArg,
    },
    /// arcs of a triangulation file to transpositions
    KappaPerm { file: Option<PathBuf> },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Replay a derivation corpus
    Derivations { dir: Option<PathBuf> },
    /// Permutation quotient of a presentation file
    Perm {
        file: Option<PathBuf>,
        /// defaults to one more than the largest `s` index
        #[arg(long)]
        decorations: Option<usize>,
    },
    /// Abelianization of a presentation file
    Abelian {
        file: Option<PathBuf>,
        /// fail unless the free rank is this
        #[arg(long)]
        rank: Option<usize>,
        /// fail on torsion
        #[arg(long)]
        torsion_free: bool,
    },
    /// Bounded search for `lhs = rhs` in a presentation file
    Search {
        file: Option<PathBuf>,
        #[arg(long)]
        lhs: String,
        #[arg(long, default_value = "1")]
        rhs: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1_000_000)]
        states: usize,
    },
    /// Disk relators through the Artin action, plus sampled non-trivial words
    Artin {
        file: Option<PathBuf>,
        #[arg(long)]
        aleph: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// What a command printed and whether its check held.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String, CliError> {
    match file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(input)?;
            Ok(s)
        }
    }
}

fn read_triangulation(file: &Option<PathBuf>) -> Result<DecoratedTriangulation, CliError> {
    serde_json::from_str(&read_input(file)?).map_err(input)
}

fn read_qp(file: &Option<PathBuf>) -> Result<Qp, CliError> {
    serde_json::from_str(&read_input(file)?).map_err(input)
}

/// Text or JSON presentation.
fn read_presentation(file: &Option<PathBuf>) -> Result<Presentation, CliError> {
    let text = read_input(file)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(input)
    } else {
        Presentation::from_text(&text).map_err(input)
    }
}

fn vertex(name: &str) -> Result<GenSym, CliError> {
    GenSym::new(name).map_err(input)
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    Word::parse(text).map_err(input)
}

fn substitution_out(sub: &Substitution) -> Output {
    let map: BTreeMap<String, String> = sub.map().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    let json = json!(map);
    Output::ok(serde_json::to_string_pretty(&json).expect("serializable"), json)
}

fn presentation_out(p: &Presentation) -> Output {
    Output::ok(
        p.to_text().trim_end().to_string(),
        serde_json::to_value(p).expect("serializable"),
    )
}

fn qp_out(qp: &Qp) -> Output {
    let qp = qp.normalize();
    Output::ok(qp.to_json(), serde_json::to_value(&qp).expect("serializable"))
}

fn surf(cmd: SurfCmd) -> Result<Output, CliError> {
    match cmd {
        SurfCmd::Validate { file } => {
            let t = read_triangulation(&file)?;
            let r = validate_triangulation(&t);
            let mut text = format!(
                "arcs {} triangles {} marked {} euler_defect {}",
                r.arcs, r.triangles, r.marked, r.euler_defect
            );
            for d in &r.diagnostics {
                text.push_str(&format!("\n{d}"));
            }
            Ok(Output {
                text,
                json: serde_json::to_value(&r).expect("serializable"),
                ok: r.is_valid(),
            })
        }
        SurfCmd::Flip { file, arc, direction } => {
            let t = read_triangulation(&file)?;
            let dir = match direction {
                DirArg::Forward => FlipDirection::Forward,
                DirArg::Backward => FlipDirection::Backward,
            };
            let r = flip(&t, &vertex(&arc)?, dir).map_err(input)?;
            let t = r.new_triangulation.canonical();
            Ok(Output::ok(t.to_json(), serde_json::to_value(&t).expect("serializable")))
        }
        SurfCmd::Canonical { file, genus, boundary } => {
            let t = match (file, genus) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give a file or --genus, not both".into())),
                (None, Some(g)) => {
                    let sig = SurfaceSignature::new(g, boundary).map_err(input)?;
                    canonical_triangulation(&sig).map_err(input)?
                }
                (file, None) => read_triangulation(&file)?.canonical(),
            };
            Ok(Output::ok(t.to_json(), serde_json::to_value(&t).expect("serializable")))
        }
    }
}

fn qp_cmd(cmd: QpCmd) -> Result<Output, CliError> {
    match cmd {
        QpCmd::Build { file } => {
            let t = read_triangulation(&file)?;
            Ok(qp_out(&qp_from_triangulation(&t).map_err(input)?))
        }
        QpCmd::Mutate { file, at, unchecked } => {
            let qp = read_qp(&file)?;
            if !unchecked {
                let diags = validate_surface_qp(&qp);
                if !diags.is_empty() {
                    let d: Vec<String> = diags.iter().map(ToString::to_string).collect();
                    return Err(CliError::Input(format!("not of surface type: {}", d.join("; "))));
                }
            }
            let (m, _) = mutate(&qp, &vertex(&at)?).map_err(input)?;
            Ok(qp_out(&m))
        }
        QpCmd::Validate { file } => {
            let qp = read_qp(&file)?;
            let d: Vec<String> = validate_surface_qp(&qp).iter().map(ToString::to_string).collect();
            let text = if d.is_empty() { "ok".to_string() } else { d.join("\n") };
            Ok(Output {
                text,
                ok: d.is_empty(),
                json: json!({ "diagnostics": d }),
            })
        }
    }
}

fn present(cmd: PresentCmd) -> Result<Output, CliError> {
    let p = match cmd {
        PresentCmd::Sbg(s) => sbg(&s.surface()?),
        PresentCmd::SbgAlt(s) => sbg_alt(&s.surface()?),
        PresentCmd::Bt(s) => bt(&s.surface()?),
        PresentCmd::BrQp { file } => br_qp(&read_qp(&file)?),
        PresentCmd::BrQpSimple { file } => br_qp_simple(&read_qp(&file)?),
    }
    .map_err(input)?;
    Ok(presentation_out(&p))
}

fn map(cmd: MapCmd) -> Result<Output, CliError> {
    let sub = match cmd {
        MapCmd::ThetaFlat { file, at } => theta_flat(&read_qp(&file)?, &vertex(&at)?).map_err(input)?,
        MapCmd::ThetaSharp { file, at } => theta_sharp(&read_qp(&file)?, &vertex(&at)?).map_err(input)?,
        MapCmd::Rho { surface, t, sign } => {
            if sign != 1 && sign != -1 {
                return Err(CliError::Usage("--sign must be 1 or -1".into()));
            }
            rho(&surface.surface()?, t, sign).map_err(input)?
        }
        MapCmd::EpsDelta { surface, direction } => {
            let dir = match direction {
                ChangeArg::EpsToDelta => ChangeDirection::EpsToDelta,
                ChangeArg::DeltaToEps => ChangeDirection::DeltaToEps,
            };
            eps_delta_change(&surface.surface()?, dir)
        }
        MapCmd::KappaPerm { file } => {
            let k = kappa_permutation(&read_triangulation(&file)?).map_err(input)?;
            let map: BTreeMap<String, String> = k.iter().map(|(a, p)| (a.to_string(), p.to_string())).collect();
            let json = json!(map);
            return Ok(Output::ok(
                serde_json::to_string_pretty(&json).expect("serializable"),
                json,
            ));
        }
    };
    Ok(substitution_out(&sub))
}

fn script_dir(dir: Option<PathBuf>) -> PathBuf {
    dir.or_else(|| std::env::var_os("BRAIDTWIST_SCRIPT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("scripts"))
}

fn derivations(dir: &Path) -> Result<Output, CliError> {
    let scripts = load_scripts(dir).map_err(input)?;
    if scripts.is_empty() {
        return Err(CliError::Input(format!("no scripts in {}", dir.display())));
    }
    let reports = check_corpus(&scripts, &mut Library::new());
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for (s, r) in scripts.iter().zip(&reports) {
        let (good, line) = match s.expect_fail_step {
            None => (r.passed, r.to_string()),
            Some(k) if !r.passed && r.failed_step == Some(k) => {
                (true, format!("PASS {} (fails at step {k} as expected)", s.name))
            }
            Some(k) => (false, format!("{r} (expected failure at step {k})")),
        };
        ok &= good;
        lines.push(line);
        rows.push(json!({ "name": s.name, "ok": good, "report": r }));
    }
    let passed = rows.iter().filter(|r| r["ok"] == true).count();
    lines.push(format!("{passed}/{} scripts as expected", rows.len()));
    Ok(Output {
        text: lines.join("\n"),
        json: json!({ "scripts": rows, "passed": passed, "total": scripts.len() }),
        ok,
    })
}

fn random_word(rng: &mut StdRng, aleph: usize) -> Word {
    let len = rng.random_range(1..=6);
    let letters = (0..len).map(|_| {
        let g = GenSym::new(&format!("s{}", rng.random_range(1..aleph))).expect("valid symbol");
        Letter::new(g, rng.random_bool(0.5))
    });
    braidtwist::word::reduce(letters)
}

fn verify(cmd: VerifyCmd) -> Result<Output, CliError> {
    match cmd {
        VerifyCmd::Derivations { dir } => derivations(&script_dir(dir)),
        VerifyCmd::Perm { file, decorations } => {
            let p = read_presentation(&file)?;
            let n = decorations.unwrap_or_else(|| {
                p.generators()
                    .iter()
                    .filter_map(|g| g.as_str().strip_prefix('s')?.parse::<usize>().ok())
                    .max()
                    .map_or(2, |m| m + 1)
            });
            let r = check_permutation_quotient(&p, &standard_assignment(&p, n));
            let mut text = format!("checked {} relators in S_{n}", r.checked);
            for v in &r.violations {
                text.push_str(&format!("\nrel[{}] maps to {}", v.tag, v.image));
            }
            for m in &r.missing {
                text.push_str(&format!("\nunassigned {m}"));
            }
            Ok(Output {
                text,
                ok: r.passed(),
                json: serde_json::to_value(&r).expect("serializable"),
            })
        }
        VerifyCmd::Abelian {
            file,
            rank,
            torsion_free,
        } => {
            let a = abelianization(&read_presentation(&file)?);
            let ok = rank.is_none_or(|r| r == a.rank) && (!torsion_free || a.torsion.is_empty());
            Ok(Output {
                text: a.to_string(),
                json: serde_json::to_value(&a).expect("serializable"),
                ok,
            })
        }
        VerifyCmd::Search {
            file,
            lhs,
            rhs,
            depth,
            states,
        } => {
            let p = read_presentation(&file)?;
            let v = word_equal_bounded(&p, &parse_word(&lhs)?, &parse_word(&rhs)?, depth, states);
            let text = match &v {
                Verdict::Equal { depth, explored, .. } => format!("equal (depth {depth}, {explored} states)"),
                Verdict::Unknown { explored } => format!("unknown ({explored} states)"),
            };
            Ok(Output {
                text,
                ok: v.is_equal(),
                json: serde_json::to_value(&v).expect("serializable"),
            })
        }
        VerifyCmd::Artin {
            file,
            aleph,
            samples,
            seed,
        } => {
            if aleph < 2 {
                return Err(CliError::Usage("--aleph must be at least 2".into()));
            }
            let p = read_presentation(&file)?;
            let ident: BTreeMap<GenSym, Word> = p.generators().iter().map(|g| (g.clone(), Word::gen(g))).collect();
            let r = check_relators_via_artin(&p, &ident, aleph).map_err(input)?;
            let rels = named_relators(&p);
            // words this search equates to 1 are skipped, not sampled
            let screen = SearchConfig {
                max_depth: 6,
                max_states: 2_000,
                max_len: None,
            };
            let mut rng = StdRng::seed_from_u64(seed);
            let (mut sampled, mut acting, mut tries) = (0, 0, 0);
            while sampled < samples && tries < 100 * samples {
                tries += 1;
                let w = random_word(&mut rng, aleph);
                if w.is_empty() || prove_trivial(&rels, &w, &screen).is_equal() {
                    continue;
                }
                sampled += 1;
                if !artin_action(&w, aleph).map_err(input)?.is_identity() {
                    acting += 1;
                }
            }
            let mut text = format!("relators trivial {}/{}", r.checked - r.failures.len(), r.checked);
            if samples > 0 {
                text.push_str(&format!(
                    "\nsampled words acting non-trivially {acting}/{sampled} (seed {seed})"
                ));
            }
            for (tag, w) in &r.failures {
                text.push_str(&format!("\nrel[{tag}] acts non-trivially: {w}"));
            }
            Ok(Output {
                text,
                ok: r.passed() && acting == sampled,
                json: json!({ "report": r, "sampled": sampled, "acting": acting, "seed": seed }),
            })
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.cmd {
        Cmd::Surf { cmd } => surf(cmd),
        Cmd::Qp { cmd } => qp_cmd(cmd),
        Cmd::Present { cmd } => present(cmd),
        Cmd::Map { cmd } => map(cmd),
        Cmd::Verify { cmd } => verify(cmd),
    }
}

fn fail(json: bool, e: &CliError) -> ExitCode {
    if json {
        println!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
    } else {
        eprintln!("error: {e}");
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            if json {
                let msg = e.render().to_string();
                return fail(true, &CliError::Usage(msg.trim().to_string()));
            }
            e.exit()
        }
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(json, &e),
    }
}
