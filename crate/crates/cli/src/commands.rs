use serde_json::{json, Value};

use quasilab::cantor::{self, CantorStats};
use quasilab::jacobi1d::{self, ModelParams, WindowSource};
use quasilab::labyrinth::{self, LabyrinthParams, ProductDos};
use quasilab::output::{fmt_f64, heat_color, json_document, Cell, Meta, Svg, Table};
use quasilab::substitution::{self, Parity};
use quasilab::tracemap::{self, CoverConfig, Escape};
use quasilab::verify::{self, VerifyConfig};
use quasilab::{BandCover, EmpiricalMeasure, Error, Result};

use crate::{cache, CommandKind, Format, RunArgs};

/// Rendered artifact and whether the command succeeded.
pub struct Output {
    pub text: String,
    pub success: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, success: true }
    }
}

/// Words longer than this are shown only by prefix.
const WORD_DISPLAY: usize = 64;
/// Largest `--points` / `--bins`.
const MAX_GRID: usize = 1_000_000;

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub fn run(kind: CommandKind, args: &RunArgs) -> Result<Output> {
    let format = match (args.format, kind) {
        (Some(f), _) => f,
        (None, CommandKind::Verify) => Format::Text,
        (None, _) => Format::Csv,
    };
    if format == Format::Text && kind != CommandKind::Verify {
        return Err(domain("--format text is only available for verify"));
    }
    check_common(args)?;
    let meta = Meta::new(command_name(kind), config_json(args));
    match kind {
        CommandKind::Sequence => sequence(args, format, &meta),
        CommandKind::Spectrum1d => spectrum1d(args, format, &meta),
        CommandKind::Dos1d => dos1d(args, format, &meta),
        CommandKind::Spectrum2d => spectrum2d(args, format, &meta),
        CommandKind::Dos2d => dos2d(args, format, &meta),
        CommandKind::Thickness => thickness(args, format, &meta),
        CommandKind::Sweep => sweep(args, format, &meta),
        CommandKind::Verify => run_verify(args, format, &meta),
    }
}

fn command_name(kind: CommandKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Run configuration embedded in artifacts. The output path is left out so
/// that the same run written to a file or to stdout is byte-identical.
fn config_json(args: &RunArgs) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    if let Value::Object(map) = &mut v {
        map.remove("output");
    }
    v
}

fn check_common(args: &RunArgs) -> Result<()> {
    if args.s == 0 {
        return Err(domain("--s must be at least 1"));
    }
    if !(args.resolution.is_finite() && args.resolution > 0.0) {
        return Err(domain("--resolution must be positive"));
    }
    if let Some(r) = args.escape_radius {
        if !(r.is_finite() && r > 0.0) {
            return Err(domain("--escape-radius must be positive"));
        }
    }
    if args.points < 2 || args.points > MAX_GRID {
        return Err(Error::ResourceCap {
            what: "grid points",
            requested: args.points as u128,
            cap: MAX_GRID as u128,
        });
    }
    if args.bins == 0 || args.bins > MAX_GRID {
        return Err(Error::ResourceCap {
            what: "histogram bins",
            requested: args.bins as u128,
            cap: MAX_GRID as u128,
        });
    }
    Ok(())
}

fn model(args: &RunArgs) -> Result<ModelParams> {
    match (args.a, args.lambda) {
        (Some(a), None) => ModelParams::new(args.s, a),
        (None, Some(l)) => ModelParams::from_coupling(args.s, l),
        _ => Err(domain("exactly one of --a and --lambda is required")),
    }
}

fn model2(args: &RunArgs) -> Result<LabyrinthParams> {
    let p1 = model(args)?;
    let a2 = match (args.a2, args.lambda2) {
        (Some(a), None) => ModelParams::new(args.s, a)?.a,
        (None, Some(l)) => ModelParams::from_coupling(args.s, l)?.a,
        (None, None) => p1.a,
        _ => return Err(domain("--a2 and --lambda2 are mutually exclusive")),
    };
    let src = source(args)?;
    Ok(LabyrinthParams::new(args.s, p1.a, a2)?.with_sources(src, src))
}

fn source(args: &RunArgs) -> Result<WindowSource> {
    match args.beta {
        Some(_) if args.offset != 0 => Err(domain("--beta and --offset are mutually exclusive")),
        Some(beta) if beta.is_finite() => Ok(WindowSource::Rotation { beta }),
        Some(_) => Err(domain("--beta must be finite")),
        None => Ok(WindowSource::Substitution { offset: args.offset }),
    }
}

fn cover_config(args: &RunArgs) -> CoverConfig {
    CoverConfig {
        escape_radius: args.escape_radius,
        ..CoverConfig::new(args.resolution)
    }
}

fn no_svg(what: &str) -> Error {
    domain(format!("{what} has no SVG rendering"))
}

fn sequence(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let s = args.s;
    let n = args.level;
    let lens = substitution::iterate_lengths(s, n).ok_or(Error::ResourceCap {
        what: "word length",
        requested: u128::MAX,
        cap: u64::MAX as u128,
    })?;
    let parity = substitution::parity_pattern(s, (n + 1).max(3))?;
    let expected = substitution::expected_parity_pattern(s, (n + 1).max(3));
    // The longest word that fits under the cap gives every shorter prefix.
    let fits = lens
        .iter()
        .rposition(|&l| l <= substitution::DEFAULT_MAX_WORD_LEN as u64);
    let longest = match fits {
        Some(k) => Some(substitution::iterate(s, k)?),
        None => None,
    };
    let mut table = Table::new([
        "n",
        "length",
        "parity",
        "expected_parity",
        "twin_pos1",
        "twin_pos2",
        "twin_offset",
        "prefix",
    ]);
    let mut twins = Vec::new();
    for (k, &len) in lens.iter().enumerate() {
        let twin = if k >= 1 && fits.is_some_and(|f| k <= f) {
            let ck = longest.as_ref().expect("fits").prefix(len as usize);
            match substitution::twin_witness(s, k, verify::WITNESS_CAP) {
                Ok(x) => substitution::find_twin(&ck, &x, Parity::Odd),
                Err(Error::ResourceCap { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let prefix = match &longest {
            Some(w) if k <= fits.expect("longest exists") => w.prefix((len as usize).min(WORD_DISPLAY)).to_string(),
            _ => String::new(),
        };
        let opt = |v: Option<usize>| {
            v.map(|x| Cell::Int(x as i64))
                .unwrap_or_else(|| Cell::Text(String::new()))
        };
        table.push(vec![
            Cell::Int(k as i64),
            Cell::Text(len.to_string()),
            Cell::Int(parity[k] as i64),
            Cell::Int(expected[k] as i64),
            opt(twin.map(|t| t.pos1)),
            opt(twin.map(|t| t.pos2)),
            opt(twin.map(|t| t.offset)),
            Cell::Text(prefix),
        ]);
        twins.push(twin);
    }
    match format {
        Format::Csv => Ok(Output::ok(table.to_csv(meta))),
        Format::Json => {
            let word = longest
                .as_ref()
                .filter(|w| fits == Some(n) && w.len() <= 10_000)
                .map(|w| Value::from(w.to_string()))
                .unwrap_or(Value::Null);
            let data = json!({
                "alpha": substitution::metallic_frequency(s),
                "rows": table.to_json_value(),
                "word": word,
                "twins": twins,
            });
            Ok(Output::ok(json_document(meta, data)))
        }
        _ => Err(no_svg("sequence")),
    }
}

fn zero_energy_orbit(p: ModelParams, args: &RunArgs) -> Value {
    let r = args
        .escape_radius
        .unwrap_or_else(|| tracemap::default_escape_radius(p.lambda()));
    match tracemap::escape_time(p.s, tracemap::line_point(p, 0.0), args.max_iter, r) {
        Escape::Survived => json!({ "max_iter": args.max_iter, "escaped_at": Value::Null }),
        Escape::Escaped(k) => json!({ "max_iter": args.max_iter, "escaped_at": k }),
    }
}

fn cover_svg(title: &str, meta: &Meta, cover: &BandCover) -> String {
    let hull = cover.hull().map(|h| (h.lo, h.hi)).unwrap_or((-1.0, 1.0));
    let mut svg = Svg::new(title, meta, hull, (0.0, 1.0));
    for b in &cover.bands {
        svg.rect(b.lo, b.hi, 0.25, 0.75, "#1f4e99");
    }
    svg.label(
        hull.0,
        0.9,
        &format!("{} bands, total length {}", cover.len(), fmt_f64(cover.total_length())),
    );
    svg.finish()
}

fn render_cover(title: &str, cover: &BandCover, extra: Value, format: Format, meta: &Meta) -> Result<Output> {
    match format {
        Format::Csv => Ok(Output::ok(cover.to_csv(meta))),
        Format::Json => {
            let mut data = serde_json::to_value(cover)?;
            if let (Value::Object(map), Value::Object(more)) = (&mut data, extra) {
                map.extend(more);
            }
            Ok(Output::ok(json_document(meta, data)))
        }
        Format::Svg => Ok(Output::ok(cover_svg(title, meta, cover))),
        Format::Text => unreachable!("rejected in run"),
    }
}

fn one_cover(p: ModelParams, args: &RunArgs) -> Result<BandCover> {
    let mut v = tracemap::spectrum_covers(p, &[args.level], &cover_config(args))?;
    Ok(v.pop().expect("one level requested"))
}

fn spectrum1d(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let p = model(args)?;
    let cover = one_cover(p, args)?;
    let extra = json!({ "zero_energy_orbit": zero_energy_orbit(p, args) });
    render_cover("1D spectrum cover", &cover, extra, format, meta)
}

fn spectrum2d(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let p = model2(args)?;
    let mut v = labyrinth::spectrum_2d_levels(p, &[args.level], &cover_config(args))?;
    let cover = v.pop().expect("one level requested");
    let extra = json!({ "lambda1": p.lambda1(), "lambda2": p.lambda2() });
    render_cover("Labyrinth spectrum cover", &cover, extra, format, meta)
}

fn curve_svg(title: &str, meta: &Meta, pts: &[(f64, f64)]) -> String {
    let x = (pts[0].0, pts[pts.len() - 1].0);
    let ymax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut svg = Svg::new(title, meta, x, (0.0, if ymax > 0.0 { ymax } else { 1.0 }));
    svg.polyline(pts, "#1f4e99");
    svg.finish()
}

fn dos1d(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let p = model(args)?;
    let eigs = cache::eigenvalues(p, args.n, source(args)?)?;
    // Every eigenvalue lies in [-2 max w, 2 max w].
    let m = 2.0 * p.a.max(1.0);
    let grid = jacobi1d::linspace(-m, m, args.points);
    let pts: Vec<(f64, f64)> = grid.iter().map(|&e| (e, eigs.cdf(e))).collect();
    match format {
        Format::Csv | Format::Json => {
            let mut table = Table::new(["E", "ids"]);
            for &(e, v) in &pts {
                table.push(vec![e.into(), v.into()]);
            }
            if format == Format::Csv {
                return Ok(Output::ok(table.to_csv(meta)));
            }
            let data = json!({ "N": args.n, "lambda": p.lambda(), "curve": table.to_json_value() });
            Ok(Output::ok(json_document(meta, data)))
        }
        _ => Ok(Output::ok(curve_svg("integrated density of states", meta, &pts))),
    }
}

fn axis_measures(p: LabyrinthParams, n: usize) -> Result<(EmpiricalMeasure, EmpiricalMeasure)> {
    let e1 = cache::eigenvalues(p.axis1(), n, p.source1)?;
    let e2 = if p.a2 == p.a1 {
        e1.clone()
    } else {
        cache::eigenvalues(p.axis2(), n, p.source2)?
    };
    Ok((e1, e2))
}

fn dos2d(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let p = model2(args)?;
    if args.n > labyrinth::MAX_SIDE_SPARSE * 4 {
        return Err(Error::ResourceCap {
            what: "2D side",
            requested: args.n as u128,
            cap: (labyrinth::MAX_SIDE_SPARSE * 4) as u128,
        });
    }
    let (e1, e2) = axis_measures(p, args.n)?;
    let dos = ProductDos::new(&e1, &e2);
    let m = 4.0 * p.a1.max(1.0) * p.a2.max(1.0);
    let edges = jacobi1d::linspace(-m, m, args.bins + 1);
    let width = edges[1] - edges[0];
    let cdfs: Vec<f64> = edges.iter().map(|&e| dos.cdf(e)).collect();
    let mut table = Table::new(["e_lo", "e_hi", "cdf", "density"]);
    for k in 0..args.bins {
        let density = (cdfs[k + 1] - cdfs[k]) / width;
        table.push(vec![
            edges[k].into(),
            edges[k + 1].into(),
            cdfs[k + 1].into(),
            density.into(),
        ]);
    }
    match format {
        Format::Csv => Ok(Output::ok(table.to_csv(meta))),
        Format::Json => {
            let data = json!({
                "N": args.n,
                "lambda1": p.lambda1(),
                "lambda2": p.lambda2(),
                "eigenvalues": dos.total(),
                "zero_factor_mass": dos.zero_factor_mass(),
                "histogram": table.to_json_value(),
            });
            Ok(Output::ok(json_document(meta, data)))
        }
        _ => {
            let top = (0..args.bins)
                .map(|k| (cdfs[k + 1] - cdfs[k]) / width)
                .fold(0.0, f64::max);
            let mut svg = Svg::new(
                "Labyrinth density of states",
                meta,
                (-m, m),
                (0.0, if top > 0.0 { top } else { 1.0 }),
            );
            for k in 0..args.bins {
                let d = (cdfs[k + 1] - cdfs[k]) / width;
                if d > 0.0 {
                    svg.rect(edges[k], edges[k + 1], 0.0, d, "#9ab3d9");
                }
            }
            let pts: Vec<(f64, f64)> = edges.iter().zip(&cdfs).map(|(&e, &c)| (e, c * top.max(1.0))).collect();
            svg.polyline(&pts, "#b22222");
            Ok(Output::ok(svg.finish()))
        }
    }
}

fn thickness(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let p = model(args)?;
    let cover = one_cover(p, args)?;
    let stats = CantorStats::of(&cover)?;
    let gaps = cantor::gaps(&cover);
    match format {
        Format::Csv => {
            let mut t = Table::new([
                "s",
                "lambda",
                "level",
                "resolution",
                "bands",
                "gaps",
                "total_length",
                "hull_lo",
                "hull_hi",
                "thickness",
                "box_dim",
            ]);
            t.push(vec![
                Cell::Int(p.s as i64),
                p.lambda().into(),
                stats_level(&cover),
                cover.resolution.into(),
                stats.bands.into(),
                gaps.len().into(),
                stats.total_length.into(),
                stats.hull.lo.into(),
                stats.hull.hi.into(),
                stats.thickness_estimate.into(),
                stats.box_dim_estimate.into(),
            ]);
            Ok(Output::ok(t.to_csv(meta)))
        }
        Format::Json => {
            let data = json!({
                "lambda": p.lambda(),
                "stats": stats.to_json_value(),
                "gaps": gaps.to_table().to_json_value(),
            });
            Ok(Output::ok(json_document(meta, data)))
        }
        _ => {
            let title = format!("thickness {}", fmt_f64(stats.thickness_estimate));
            Ok(Output::ok(cover_svg(&title, meta, &cover)))
        }
    }
}

fn stats_level(c: &BandCover) -> Cell {
    Cell::Int(c.level as i64)
}

fn parse_lambdas(text: &str) -> Result<Vec<f64>> {
    let v = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coupling {t:?} in --lambdas")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if v.is_empty() {
        return Err(domain("--lambdas is empty"));
    }
    Ok(v)
}

fn sweep(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let lambdas = parse_lambdas(&args.lambdas)?;
    let rows = labyrinth::classify_sweep(
        args.s,
        &lambdas,
        &lambdas,
        args.level,
        &cover_config(args),
        args.resolution,
    )?;
    let mut table = Table::new([
        "lambda1",
        "lambda2",
        "is_interval",
        "total_gap_length",
        "thickness1",
        "thickness2",
    ]);
    for r in &rows {
        table.push(vec![
            r.lambda1.into(),
            r.lambda2.into(),
            r.is_interval.into(),
            r.total_gap_length.into(),
            r.thickness1.into(),
            r.thickness2.into(),
        ]);
    }
    match format {
        Format::Csv => Ok(Output::ok(table.to_csv(meta))),
        Format::Json => Ok(Output::ok(json_document(
            meta,
            json!({ "rows": table.to_json_value() }),
        ))),
        _ => {
            let n = lambdas.len() as f64;
            let mut svg = Svg::new("interval (blue) / gapped (red) products", meta, (0.0, n), (0.0, n));
            for (idx, r) in rows.iter().enumerate() {
                let (i, j) = ((idx / lambdas.len()) as f64, (idx % lambdas.len()) as f64);
                let color = heat_color(if r.is_interval { 0.0 } else { 1.0 });
                svg.rect(i, i + 1.0, j, j + 1.0, &color);
            }
            for (k, l) in lambdas.iter().enumerate() {
                svg.label(k as f64 + 0.1, -0.3, &format!("{l}"));
            }
            Ok(Output::ok(svg.finish()))
        }
    }
}

fn run_verify(args: &RunArgs, format: Format, meta: &Meta) -> Result<Output> {
    let results = verify::run_all(&VerifyConfig { seed: args.seed });
    let success = results.iter().all(|r| r.passed);
    let text = match format {
        Format::Text => verify::render_text(&results),
        Format::Json => json_document(meta, serde_json::to_value(&results)?),
        Format::Csv => {
            let mut t = Table::new(["id", "name", "passed", "detail"]);
            for r in &results {
                t.push(vec![
                    Cell::Int(r.id as i64),
                    r.name.into(),
                    r.passed.into(),
                    r.detail.clone().into(),
                ]);
            }
            t.to_csv(meta)
        }
        Format::Svg => return Err(no_svg("verify")),
    };
    Ok(Output { text, success })
}
