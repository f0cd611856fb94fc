use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use strate::arith::{self, CurveModel, NormedEulerFactor};
use strate::chars::{CharLabel, ClassFunction, VirtualCharacter};
use strate::expr::parse_expr;
use strate::StGroup;

use crate::{Cli, Failure};

pub type Res<T> = Result<T, Failure>;

/// Version, config hash and seed of a run.
pub struct RunInfo {
    pub version: &'static str,
    pub config: String,
    pub seed: u64,
}

impl RunInfo {
    pub fn new(cli: &Cli) -> Self {
        let hash = Sha256::digest(format!("{cli:?}").as_bytes());
        RunInfo {
            version: env!("CARGO_PKG_VERSION"),
            config: hex::encode(&hash[..8]),
            seed: cli.opts.seed,
        }
    }

    pub fn comment(&self) -> String {
        format!("strate {} config={} seed={}", self.version, self.config, self.seed)
    }

    pub fn json(&self) -> Value {
        json!({"version": self.version, "config_sha256": self.config, "seed": self.seed})
    }
}

pub fn output(path: Option<&Path>) -> Res<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json(cli: &Cli, mut body: Value, run: &RunInfo) -> Res<()> {
    body["run"] = run.json();
    let mut w = output(cli.opts.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &body).map_err(|e| Failure::input(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn load_curve(cli: &Cli) -> Res<CurveModel> {
    let path = cli.opts.curve.as_ref().ok_or_else(|| Failure::input("--curve is required"))?;
    let curves = arith::read_curve_file(path)?;
    match &cli.opts.label {
        Some(l) => curves
            .into_iter()
            .find(|c| &c.label == l)
            .ok_or_else(|| Failure::input(format!("no curve labelled {l} in {}", path.display()))),
        None => curves
            .into_iter()
            .next()
            .ok_or_else(|| Failure::input(format!("{} contains no curves", path.display()))),
    }
}

/// Euler factors from `--ingest` or by counting on `--curve`, plus a source name.
pub fn load_factors(cli: &Cli) -> Res<(Vec<NormedEulerFactor>, String)> {
    if let Some(path) = &cli.opts.ingest {
        let mut f = arith::ingest_lpoly_file(path)?;
        if let Some(b) = cli.opts.bound {
            f.retain(|f| f.norm <= b);
        }
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok((f, name));
    }
    let curve = load_curve(cli)?;
    let bound = cli.opts.bound.ok_or_else(|| Failure::input("--bound is required"))?;
    let lp = arith::lpolys(&curve, bound, cli.opts.g2_cap)?;
    let factors = match cli.opts.disc {
        Some(d) => {
            let mut f = arith::base_change_series(&lp, d)?;
            f.retain(|f| f.norm <= bound);
            f
        }
        None => lp.iter().map(|l| l.as_factor()).collect(),
    };
    Ok((factors, curve.label))
}

pub fn group_for(cli: &Cli, genus: u8) -> Res<StGroup> {
    match &cli.opts.group {
        Some(g) => Ok(g.parse()?),
        None if genus == 2 => Ok(StGroup::USp4),
        None => Ok(StGroup::SU2),
    }
}

/// Group from `--group`, or from the data source's genus.
pub fn group_from_source(cli: &Cli) -> Res<StGroup> {
    if let Some(g) = &cli.opts.group {
        return Ok(g.parse()?);
    }
    if cli.opts.ingest.is_none() && cli.opts.curve.is_none() {
        return Err(Failure::input("--group is required without --curve or --ingest"));
    }
    if cli.opts.ingest.is_some() {
        let (f, _) = load_factors(cli)?;
        return group_for(cli, f.first().map_or(1, |f| f.genus()));
    }
    group_for(cli, load_curve(cli)?.genus())
}

pub fn char_text(cli: &Cli) -> Res<&str> {
    cli.opts
        .character
        .as_deref()
        .ok_or_else(|| Failure::input("--char is required"))
}

/// The `--char` argument as a virtual character on `group`.
pub fn load_char(cli: &Cli, group: StGroup) -> Res<VirtualCharacter> {
    let text = char_text(cli)?;
    if let Some(path) = text.strip_prefix('@') {
        let s = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
        let v = VirtualCharacter::from_json(&s)?;
        if v.group() != group {
            return Err(Failure::input(format!(
                "character file is on {}, data is on {group}",
                v.group()
            )));
        }
        return Ok(v);
    }
    Ok(parse_expr(text, group)?.to_vchar()?)
}

/// Removes the trivial constituent, warning on stderr if there was one.
pub fn tilde(v: VirtualCharacter) -> Res<VirtualCharacter> {
    let t = v.trivial_coeff();
    if t.norm() == 0.0 {
        return Ok(v);
    }
    eprintln!("warning: character contains the trivial character with coefficient {t}; subtracting it");
    let mut triv = VirtualCharacter::new(v.group());
    triv.add_term(CharLabel::trivial(v.group()), t)?;
    Ok(v.sub(&triv)?.pruned(0.0))
}

pub fn complex_json(z: Complex64) -> Value {
    // adding 0.0 turns -0.0 into 0.0
    json!({"re": z.re + 0.0, "im": z.im + 0.0})
}
