use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use strate::arith;
use strate::chars::{self, CharLabel, ClassFunction, VirtualCharacter};
use strate::expr::parse_expr;
use strate::predict::{self, Constants, RankProfile, ZeroList};
use strate::stats::{self, DeltaColumns, Series2d, StatSeries};
use strate::stgroup::haar_sample;
use strate::StGroup;

use crate::data::{self, Res, RunInfo};
use crate::{Cli, Command, Failure};

pub fn run(cli: &Cli) -> Res<()> {
    let run = RunInfo::new(cli);
    match &cli.command {
        Command::Lpoly => lpoly(cli, &run),
        Command::Classes => classes(cli, &run),
        Command::Delta => delta(cli, &run),
        Command::Ipnorm => ipnorm(cli, &run),
        Command::Bias => bias(cli, &run),
        Command::Decompose => decompose(cli, &run),
        Command::Fs => fs(cli, &run),
        Command::Predict => predict_cmd(cli, &run),
        Command::Bound => bound(cli, &run),
        Command::Sample => sample(cli, &run),
        Command::Plot { files, log_x, title } => plot(cli, files, *log_x, title),
    }
}

fn lpoly(cli: &Cli, run: &RunInfo) -> Res<()> {
    let (factors, name) = data::load_factors(cli)?;
    let mut w = data::output(cli.opts.out.as_deref())?;
    arith::write_lpoly_csv(&mut w, &[run.comment(), format!("source={name}")], &factors)?;
    w.flush()?;
    Ok(())
}

fn classes(cli: &Cli, run: &RunInfo) -> Res<()> {
    let (factors, name) = data::load_factors(cli)?;
    let group = data::group_for(cli, factors.first().map_or(1, |f| f.genus()))?;
    let points = stats::class_stream(&factors, group)?;
    let mut w = data::output(cli.opts.out.as_deref())?;
    writeln!(w, "# {}", run.comment())?;
    writeln!(w, "# source={name} group={group}")?;
    writeln!(
        w,
        "{}",
        if group.arity() == 1 { "norm,theta,component" } else { "norm,alpha,beta,component" }
    )?;
    for (n, p) in &points {
        writeln!(w, "{}", p.csv_row(*n))?;
    }
    w.flush()?;
    Ok(())
}

/// Data, group, the character with its trivial part removed, and the series.
struct Prepared {
    name: String,
    group: StGroup,
    phi: VirtualCharacter,
    series: StatSeries,
}

fn prepare(cli: &Cli) -> Res<Prepared> {
    let (factors, name) = data::load_factors(cli)?;
    let group = data::group_for(cli, factors.first().map_or(1, |f| f.genus()))?;
    let phi = data::tilde(data::load_char(cli, group)?)?;
    let stream = stats::class_stream(&factors, group)?;
    let series = stats::build_series(stream, &phi)?.with_labels(&name, phi.to_string());
    if series.is_empty() {
        return Err(Failure::input("no Euler factors below the bound"));
    }
    Ok(Prepared { name, group, phi, series })
}

fn header(run: &RunInfo, p: &Prepared) -> Vec<String> {
    vec![
        run.comment(),
        format!("source={} group={} char={}", p.name, p.group, p.phi),
    ]
}

fn delta(cli: &Cli, run: &RunInfo) -> Res<()> {
    let p = prepare(cli)?;
    let xs = match cli.opts.checkpoints {
        0 => stats::checkpoints(&p.series),
        n => stats::log_checkpoints(&p.series, n)?,
    };
    let columns = if cli.opts.squared { DeltaColumns::Squared } else { DeltaColumns::Complex };
    let mut w = data::output(cli.opts.out.as_deref())?;
    stats::write_delta_csv(&mut w, &p.series, &xs, columns, &header(run, &p))?;
    w.flush()?;
    if let Some(svg) = &cli.opts.svg {
        let points = xs
            .iter()
            .map(|&x| {
                let d = stats::delta(&p.series, x)?;
                Ok((x, if cli.opts.squared { d.norm_sqr() } else { d.re }))
            })
            .collect::<strate::Result<Vec<_>>>()?;
        let y = if cli.opts.squared { "|delta|^2" } else { "delta" };
        let body = stats::svg_plot(
            &[Series2d { name: format!("{} {}", p.name, p.phi), points }],
            true,
            &format!("{y}({}, x)", p.phi),
            y,
        );
        std::fs::write(svg, body).map_err(|e| Failure::input(format!("{}: {e}", svg.display())))?;
    }
    Ok(())
}

fn x_max(cli: &Cli, series: &StatSeries) -> Res<f64> {
    Ok(match cli.opts.bound {
        Some(b) => b as f64,
        None => series.last_norm()? as f64,
    })
}

fn ranks(cli: &Cli) -> Res<Option<RankProfile>> {
    Ok(match &cli.opts.ranks {
        Some(p) => Some(RankProfile::read(p)?),
        None => None,
    })
}

fn zeros(cli: &Cli, phi: &VirtualCharacter) -> Res<Option<ZeroList>> {
    let default = if phi.len() == 1 { phi.labels().next() } else { None };
    Ok(match &cli.opts.zeros {
        Some(p) => Some(ZeroList::read(p, default)?),
        None => None,
    })
}

fn ipnorm(cli: &Cli, run: &RunInfo) -> Res<()> {
    let p = prepare(cli)?;
    let x = x_max(cli, &p.series)?;
    let value = stats::i_norm(&p.series, x)?;
    let i1 = ranks(cli)?.map(|r| predict::i1(&p.phi, &r)).transpose()?;
    let i2 = zeros(cli, &p.phi)?.map(|z| predict::i2(&p.phi, &z).value);
    data::write_json(
        cli,
        json!({
            "source": p.name, "group": p.group.as_str(), "char": p.phi.to_string(),
            "X": x, "value": value, "predicted_i1": i1, "predicted_i2_truncated": i2,
        }),
        run,
    )
}

fn bias(cli: &Cli, run: &RunInfo) -> Res<()> {
    let p = prepare(cli)?;
    let x = x_max(cli, &p.series)?;
    let value = stats::bias_mean(&p.series, x)?;
    let pred = ranks(cli)?
        .map(|r| predict::bias_prediction(&p.phi, &r))
        .transpose()?;
    data::write_json(
        cli,
        json!({
            "source": p.name, "group": p.group.as_str(), "char": p.phi.to_string(),
            "X": x, "value": data::complex_json(value),
            "predicted": pred.map(data::complex_json),
        }),
        run,
    )
}

/// Group for commands that may run without data: explicit, from the data
/// source, or SU2.
fn query_group(cli: &Cli) -> Res<StGroup> {
    if cli.opts.group.is_none() && cli.opts.curve.is_none() && cli.opts.ingest.is_none() {
        return Ok(StGroup::SU2);
    }
    data::group_from_source(cli)
}

fn coeff_map(v: &VirtualCharacter) -> Map<String, Value> {
    v.terms()
        .map(|(l, c)| {
            let val = if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 9e15 {
                json!(c.re as i64)
            } else if c.im == 0.0 {
                json!(c.re)
            } else {
                data::complex_json(c)
            };
            (l.to_string(), val)
        })
        .collect()
}

fn decompose(cli: &Cli, run: &RunInfo) -> Res<()> {
    let text = data::char_text(cli)?;
    let (group, exact, f): (StGroup, VirtualCharacter, Box<dyn ClassFunction>) =
        if let Some(path) = text.strip_prefix('@') {
            let s = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{path}: {e}")))?;
            let v = VirtualCharacter::from_json(&s)?;
            (v.group(), v.clone(), Box::new(v))
        } else {
            let group = query_group(cli)?;
            let e = parse_expr(text, group)?;
            (group, e.to_vchar()?, Box::new(e))
        };
    let max = cli.opts.max.unwrap_or(exact.max_index() + 1);
    let num = chars::decompose_numeric(&f, max)?;
    data::write_json(
        cli,
        json!({
            "group": group.as_str(),
            "char": text,
            "coeffs": coeff_map(&exact),
            "numeric": {
                "max_index": max,
                "residual": num.residual,
                "integral": num.integral,
                "coeffs": coeff_map(&num.to_vchar()),
            },
        }),
        run,
    )
}

fn fs(cli: &Cli, run: &RunInfo) -> Res<()> {
    let text = data::char_text(cli)?;
    let label = match &cli.opts.group {
        Some(g) => CharLabel::parse_in(text, g.parse()?)?,
        None => text.parse::<CharLabel>()?,
    };
    data::write_json(
        cli,
        json!({
            "label": label.to_string(),
            "group": label.group().as_str(),
            "fs_index": chars::fs_index(label),
            "numeric": chars::fs_index_numeric(label),
        }),
        run,
    )
}

fn predict_cmd(cli: &Cli, run: &RunInfo) -> Res<()> {
    let group = query_group(cli)?;
    let phi = data::tilde(data::load_char(cli, group)?)?;
    let ranks = ranks(cli)?.ok_or_else(|| Failure::input("--ranks is required"))?;
    let i1 = predict::i1(&phi, &ranks)?;
    let bias = predict::bias_prediction(&phi, &ranks)?;
    let i2 = zeros(cli, &phi)?.map(|z| predict::i2(&phi, &z));
    data::write_json(
        cli,
        json!({
            "group": group.as_str(),
            "char": phi.to_string(),
            "i1": i1,
            "bias": data::complex_json(bias),
            "i2": i2.map(|r| json!({"value": r.value, "truncated_at": r.truncated_at})),
        }),
        run,
    )
}

fn bound(cli: &Cli, run: &RunInfo) -> Res<()> {
    let group = query_group(cli)?;
    let phi = data::tilde(data::load_char(cli, group)?)?;
    let o = &cli.opts;
    let k = Constants([o.k1, o.k2, o.k3, o.k4, o.k5, o.k6]);
    let r = predict::bound_report(&phi, o.field_degree, o.conductor, &k)?;
    data::write_json(
        cli,
        json!({
            "group": group.as_str(),
            "char": phi.to_string(),
            "R": r.r,
            "C": r.c,
            "S": r.s,
            "S_per_label": r.per_label,
            "upper_bound": r.upper_bound,
            "upper_bound_formula": "K6 * R * S^2 * C",
            "l2_bound": r.l2_bound,
            "l2_bound_formula": "K1 * ((sum |c| S)^2 + sum c^2 S)",
            "constants": {"K1": o.k1, "K2": o.k2, "K3": o.k3, "K4": o.k4, "K5": o.k5, "K6": o.k6},
            "conductor": o.conductor,
            "field_degree": o.field_degree,
        }),
        run,
    )
}

fn sample(cli: &Cli, run: &RunInfo) -> Res<()> {
    let group: StGroup = match &cli.opts.group {
        Some(g) => g.parse()?,
        None => return Err(Failure::input("--group is required")),
    };
    let mut w = data::output(cli.opts.out.as_deref())?;
    writeln!(w, "# {}", run.comment())?;
    writeln!(w, "# group={group} count={}", cli.opts.count)?;
    writeln!(
        w,
        "{}",
        if group.arity() == 1 { "index,theta,component" } else { "index,alpha,beta,component" }
    )?;
    for (i, p) in haar_sample(group, cli.opts.seed, cli.opts.count).iter().enumerate() {
        writeln!(w, "{}", p.csv_row(i as u64))?;
    }
    w.flush()?;
    Ok(())
}

fn read_xy(path: &Path) -> Res<Series2d> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut points = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',');
        let parsed = match (cols.next(), cols.next()) {
            (Some(x), Some(y)) => x.trim().parse::<f64>().ok().zip(y.trim().parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(p) => points.push(p),
            None if !header_seen && points.is_empty() => header_seen = true,
            None => {
                return Err(Failure::input(format!(
                    "{}: line {}: expected two numeric columns",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Series2d { name, points })
}

fn plot(cli: &Cli, files: &[std::path::PathBuf], log_x: bool, title: &str) -> Res<()> {
    let series = files.iter().map(|f| read_xy(f)).collect::<Res<Vec<_>>>()?;
    let svg = stats::svg_plot(&series, log_x, title, "y");
    let target = cli.opts.svg.as_deref().or(cli.opts.out.as_deref());
    let mut w = data::output(target)?;
    w.write_all(svg.as_bytes())?;
    w.flush()?;
    Ok(())
}
