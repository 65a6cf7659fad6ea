//! Argument parsing and subcommand dispatch.

use std::io::Write;

use actions_crossed_products::{canonical_action, crossed_product, fixed_point_report, fixed_points, minimality, theta_iso};
use clap::{Parser, Subcommand};
use fd_star_algebra::{Config, Element, Report};
use tower_reconstruction::{
    build_tower_from_group, classify, deform, deform_tower, identity_suite, kac_dichotomy, reconstruct, twisted_bundle,
    undeform, verify_tower_premises, TowerData, TwistedStructure,
};
use weak_hopf_core::{dual_algebra, function_algebra, group_algebra, pair_groupoid, verify_axioms, FiniteGroup, WeakHopfData};

use crate::codec;
use crate::error::{computation, CliError, Result, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use crate::object::{load_object, Kind, WorkbenchObject};
use crate::report::VerificationReport;

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Weak Hopf algebras, Jones towers and crossed products")]
pub struct Cli {
    /// Residual tolerance for every check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the produced object here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a weak Hopf algebra.
    Gen {
        #[command(subcommand)]
        what: GenTarget,
    },
    /// Check the weak Hopf axioms of a structure and classify it.
    VerifyWha { file: String },
    /// The dual weak Hopf algebra.
    Dual {
        file: String,
    },
    /// Build a tower.
    Tower {
        #[command(subcommand)]
        what: TowerTarget,
    },
    /// Reconstruct the weak Hopf structure of a tower and verify it.
    Reconstruct {
        file: String,
    },
    /// Deform a tower's structure or a twisted structure by its canonical element.
    Deform {
        file: String,
        /// Canonical element (element file); defaults to the "H" of FILE or 1.
        #[arg(long = "h")]
        h: Option<String>,
    },
    /// Undo a deformation: twist a weak Hopf structure by a positive central H.
    Undeform {
        file: String,
        #[arg(long = "h")]
        h: String,
    },
    /// Canonical action, fixed points, crossed product and its identification.
    CrossedProduct {
        file: String,
    },
    /// Render a saved report.
    Report { file: String },
}

#[derive(Debug, Subcommand)]
pub enum GenTarget {
    /// Groupoid algebra of the pair groupoid on N points (M_N).
    PairGroupoid { n: usize },
    /// Group algebra C[G]; SPEC is `cyclic N`, `sym N` or `table FILE`.
    Group {
        #[arg(num_args = 1..=2, required = true)]
        spec: Vec<String>,
    },
    /// Function algebra C^G.
    Function {
        #[arg(num_args = 1..=2, required = true)]
        spec: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TowerTarget {
    /// The tower C ⊂ C^G ⊂ M1 ⊂ M2 for a group.
    FromGroup {
        #[arg(num_args = 1..=2, required = true)]
        spec: Vec<String>,
    },
}

/// Parse `cyclic N`, `sym N` or `table FILE`.
pub fn parse_group(spec: &[String]) -> Result<FiniteGroup> {
    let order = |s: &str| s.parse::<usize>().map_err(|_| CliError::Usage(format!("group order \"{s}\" is not an integer")));
    let g = match spec {
        [k, n] if k == "cyclic" => FiniteGroup::cyclic(order(n)?),
        [k, n] if k == "sym" || k == "symmetric" => FiniteGroup::symmetric(order(n)?),
        [k, path] if k == "table" => return codec::to_group(&load_object(path)?.expect(&[Kind::Group])?.payload),
        _ => return Err(CliError::Usage(format!("unknown group spec {spec:?}; use `cyclic N`, `sym N` or `table FILE`"))),
    };
    g.map_err(|e| CliError::Usage(e.to_string()))
}

struct Ctx<'a> {
    cfg: Config,
    json: bool,
    out_path: Option<String>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn object(&self, kind: Kind, payload: serde_json::Value) -> WorkbenchObject {
        WorkbenchObject::new(kind, payload, self.cfg.tol, self.cfg.seed)
    }

    fn write(&mut self, text: &str) -> Result<()> {
        self.out.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), message: e.to_string() })
    }

    /// Object to `--out` or standard output.
    fn emit_object(&mut self, o: &WorkbenchObject) -> Result<()> {
        match &self.out_path {
            Some(p) => std::fs::write(p, o.to_json()).map_err(|e| CliError::Io { path: p.clone(), message: e.to_string() }),
            None => self.write(&o.to_json()),
        }
    }

    fn save(&mut self, o: &WorkbenchObject) -> Result<()> {
        match &self.out_path {
            Some(_) => self.emit_object(o),
            None => Ok(()),
        }
    }

    /// Print the report (JSON mode wraps it in a report object) and return
    /// the exit status it implies.
    fn finish(&mut self, r: &VerificationReport) -> Result<i32> {
        if self.json {
            let o = self.object(Kind::Report, r.to_json());
            self.write(&o.to_json())?;
        } else {
            self.write(&r.table())?;
        }
        for (title, c) in r.failures() {
            let _ = writeln!(self.err, "verification failed: {title}: {} [{}] residual {}", c.name, c.tag, crate::report::sci(c.residual));
        }
        Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFICATION })
    }
}

fn load_weak_hopf(path: &str) -> Result<(WeakHopfData, Option<Element>)> {
    codec::to_weak_hopf(&load_object(path)?.expect(&[Kind::WeakHopf])?.payload)
}

fn load_tower(path: &str, tol: f64) -> Result<TowerData> {
    codec::to_tower(&load_object(path)?.expect(&[Kind::Tower])?.payload, tol)
}

fn load_h(path: &str, w: &WeakHopfData) -> Result<Element> {
    let (alg, h) = codec::to_element(&load_object(path)?.expect(&[Kind::Element])?.payload)?;
    if alg != w.algebra {
        return Err(CliError::Schema(format!("H has blocks {:?}, the algebra has {:?}", alg.blocks(), w.algebra.blocks())));
    }
    Ok(h)
}

/// Premises first; a tower that fails them is reported and not reconstructed.
fn premises(t: &TowerData, rep: &mut VerificationReport, tol: f64) -> bool {
    let p = verify_tower_premises(t, tol);
    let ok = p.passed();
    rep.push(p);
    ok
}

fn run_parsed(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(CliError::Usage(format!("--tolerance must be positive, got {}", cli.tolerance)));
    }
    let cfg = Config { tol: cli.tolerance, seed: cli.seed };
    let tol = cfg.tol;
    let mut ctx = Ctx { cfg, json: cli.json, out_path: cli.out, out, err };
    match cli.command {
        Command::Gen { what } => {
            let w = match what {
                GenTarget::PairGroupoid { n } => pair_groupoid(n).map_err(|e| CliError::Usage(e.to_string()))?,
                GenTarget::Group { spec } => group_algebra(&parse_group(&spec)?, &cfg).map_err(computation)?.data,
                GenTarget::Function { spec } => function_algebra(&parse_group(&spec)?).map_err(computation)?,
            };
            let o = ctx.object(Kind::WeakHopf, codec::weak_hopf(&w, None));
            ctx.emit_object(&o)?;
            Ok(EXIT_OK)
        }
        Command::VerifyWha { file } => {
            let (w, _) = load_weak_hopf(&file)?;
            let ax = verify_axioms(&w, tol);
            let mut rep = VerificationReport::new(ax.classification, tol, cfg.seed);
            let mut r = ax.report;
            r.fact("blocks", format!("{:?}", w.algebra.blocks()));
            r.fact("classification", ax.classification);
            rep.push(r);
            ctx.finish(&rep)
        }
        Command::Dual { file } => {
            let (w, _) = load_weak_hopf(&file)?;
            let dual = dual_algebra(&w, &cfg).map_err(computation)?;
            let o = ctx.object(Kind::WeakHopf, codec::weak_hopf(&dual.data, None));
            ctx.emit_object(&o)?;
            Ok(EXIT_OK)
        }
        Command::Tower { what: TowerTarget::FromGroup { spec } } => {
            let t = build_tower_from_group(&parse_group(&spec)?, &cfg).map_err(computation)?;
            let o = ctx.object(Kind::Tower, codec::tower(&t));
            ctx.emit_object(&o)?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct { file } => {
            let t = load_tower(&file, tol)?;
            let mut rep = VerificationReport::new("invalid", tol, cfg.seed);
            if !premises(&t, &mut rep, tol) {
                return ctx.finish(&rep);
            }
            let r = reconstruct(&t, &cfg).map_err(computation)?;
            rep.push(r.report.clone());
            rep.push(identity_suite(&t, &r, tol));
            let c = classify(&t, &r, tol).map_err(computation)?;
            rep.classification = c.classification.to_string();
            rep.push(c.report);
            let mut s = Report::new("summary");
            s.fact("H = 1", r.h_defect() <= tol);
            s.fact("lambda^-1", 1.0 / t.lambda);
            s.fact("dim B", r.on_b.dim());
            s.fact("classification", c.classification);
            rep.push(s);
            let o = ctx.object(Kind::WeakHopf, codec::weak_hopf(&r.on_b, Some(&r.h)));
            ctx.save(&o)?;
            ctx.finish(&rep)
        }
        Command::Deform { file, h } => {
            let obj = load_object(&file)?.expect(&[Kind::Tower, Kind::WeakHopf])?;
            let mut rep = VerificationReport::new("invalid", tol, cfg.seed);
            let def = if obj.kind == Kind::Tower {
                if h.is_some() {
                    return Err(CliError::Usage("--h is taken from the tower; do not pass it with a tower file".into()));
                }
                let t = codec::to_tower(&obj.payload, tol)?;
                if !premises(&t, &mut rep, tol) {
                    return ctx.finish(&rep);
                }
                let r = reconstruct(&t, &cfg).map_err(computation)?;
                deform_tower(&t, &r, tol).map_err(computation)?
            } else {
                let (w, embedded) = codec::to_weak_hopf(&obj.payload)?;
                let h = match (h, embedded) {
                    (Some(p), _) => load_h(&p, &w)?,
                    (None, Some(e)) => e,
                    (None, None) => w.unit(),
                };
                deform(&TwistedStructure { data: w, h }, tol).map_err(computation)?
            };
            rep.classification = def.axioms.classification.to_string();
            rep.push(def.report.clone());
            rep.push(def.axioms.report.clone());
            let o = ctx.object(Kind::WeakHopf, codec::weak_hopf(&def.data, Some(&def.h)));
            ctx.save(&o)?;
            ctx.finish(&rep)
        }
        Command::Undeform { file, h } => {
            let (w, _) = load_weak_hopf(&file)?;
            let h = load_h(&h, &w)?;
            let (tw, r) = undeform(&w, &h, tol).map_err(computation)?;
            let mut rep = VerificationReport::new("invalid", tol, cfg.seed);
            rep.push(r);
            rep.push(twisted_bundle(&tw, tol));
            let (class, _, dich) = kac_dichotomy(&tw, tol).map_err(computation)?;
            rep.classification = class.to_string();
            rep.push(dich);
            let o = ctx.object(Kind::WeakHopf, codec::weak_hopf(&tw.data, Some(&tw.h)));
            ctx.save(&o)?;
            ctx.finish(&rep)
        }
        Command::CrossedProduct { file } => {
            let t = load_tower(&file, tol)?;
            let mut rep = VerificationReport::new("invalid", tol, cfg.seed);
            if !premises(&t, &mut rep, tol) {
                return ctx.finish(&rep);
            }
            let r = reconstruct(&t, &cfg).map_err(computation)?;
            let def = deform_tower(&t, &r, tol).map_err(computation)?;
            rep.classification = def.axioms.classification.to_string();
            let act = canonical_action(&t, &def, &cfg).map_err(computation)?;
            rep.push(act.report.clone());
            let fixed = fixed_points(&act.action, &cfg).map_err(computation)?;
            rep.push(fixed_point_report(&t, &fixed, tol).map_err(computation)?);
            let cp = crossed_product(&act.action, &cfg).map_err(computation)?;
            rep.push(cp.report.clone());
            let mut min = minimality(&cp, &cfg);
            min.report.require("commutant of M = B_s image", "minimality", min.minimal);
            rep.push(min.report);
            let theta = theta_iso(&t, &def, &cp, &cfg).map_err(computation)?;
            rep.push(theta.report.clone());
            let o = ctx.object(Kind::CrossedProduct, codec::crossed_product(&cp, &theta, &t.ambient));
            ctx.save(&o)?;
            ctx.finish(&rep)
        }
        Command::Report { file } => {
            let o = load_object(&file)?.expect(&[Kind::Report])?;
            let rep = VerificationReport::from_json(&o.payload)?;
            ctx.finish(&rep)
        }
    }
}

/// Run the CLI on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`.  Returns the exit status.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match run_parsed(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
