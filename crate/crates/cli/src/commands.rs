use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use alpha_core::alpha::{alpha_enclosure, alpha_exact, af_survey, check_facts, within_collar, AlphaReport, Engine, Verdict};
use alpha_core::combinators::{
    bichromatic_lines_brute_force, check_chain_structure, find_bichromatic_line, matches_sine_curve, quotient_collapse,
    ProductSpace, DEFAULT_CELL_BUDGET,
};
use alpha_core::gallery::{self, random_runs};
use alpha_core::graph::{transition_graph, DEFAULT_SAMPLES};
use alpha_core::maps::{build_named_map, map_label, MapSpec};
use alpha_core::schema::{BuiltSpace, Config};
use alpha_core::space::{build_named_space, CellKind, ClosedSet, NamedSpace};
use alpha_core::svg::render;
use alpha_core::{Error, Space};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::EngineArg;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }

    fn config(msg: impl Into<String>) -> Self {
        Self::new(2, msg)
    }

    fn verdict(msg: impl Into<String>) -> Self {
        Self::new(5, msg)
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InexactMap(_) | Error::CapExceeded(_) => 4,
            Error::Schema(_)
            | Error::ZeroMesh(_)
            | Error::TruncationTooSmall(_)
            | Error::IncompatibleMap { .. }
            | Error::IndexOutOfTruncation { .. }
            | Error::UnknownLandmark(_)
            | Error::FactorCount { .. }
            | Error::CellBudgetExceeded { .. }
            | Error::PaddingBelowBound { .. } => 2,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(1, e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuotientCheck {
    /// Chain of sine curves converging to the collapsed point.
    Chain,
    /// Topologist's sine curve with the same number of laps.
    Sine,
}

fn read_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Config::from_toml(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn planar(cfg: &Config) -> Result<Space> {
    match cfg.space.build()? {
        BuiltSpace::Planar(s) => Ok(s),
        BuiltSpace::Cylinder(_) => Err(CliError::new(4, "cylinder spaces have no cell engines; use the gallery zero-dim row")),
    }
}

/// Config, space and map of an artifact directory.
fn load(dir: &Path) -> Result<(Config, Space, Option<MapSpec>)> {
    let path = dir.join("config.toml");
    if !path.exists() {
        return Err(CliError::new(3, format!("missing artifact {}; run `alphalim build` first", path.display())));
    }
    let cfg = read_config(&path)?;
    let space = planar(&cfg)?;
    let map = cfg.map.as_ref().map(|m| build_named_map(&space, m)).transpose()?;
    Ok((cfg, space, map))
}

fn need_map(map: Option<MapSpec>) -> Result<MapSpec> {
    map.ok_or_else(|| CliError::new(3, "artifact has no map; add a [map] table to the config"))
}

fn cells_csv(space: &Space) -> String {
    let mut out = String::from("id,label,kind,summand,piece,t0,t1\n");
    for c in 0..space.cell_count() {
        let cell = space.cell(c);
        let tail = match cell.kind {
            CellKind::Arc { piece, t0, t1, .. } => format!("arc,{},{piece},{t0},{t1}", cell.summand),
            CellKind::Point(_) => format!("point,{},,,", cell.summand),
        };
        out.push_str(&format!("{c},\"{}\",{tail}\n", space.cell_label(c)));
    }
    out
}

fn members_csv(space: &Space, cells: &BTreeSet<usize>) -> String {
    let mut out = String::from("id,label\n");
    for &c in cells {
        out.push_str(&format!("{c},\"{}\"\n", space.cell_label(c)));
    }
    out
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' }).collect()
}

pub fn build(config: &Path, out: &Path) -> Result<()> {
    let cfg = read_config(config)?;
    let mut summary = format!("kind: {}\nmesh: {}\n", cfg.space.kind, cfg.space.mesh()?);
    match cfg.space.build()? {
        BuiltSpace::Cylinder(c) => {
            summary.push_str(&format!("depth: {}\n", c.depth));
            let words: Vec<String> = c.words(c.depth).map(|w| alpha_core::cylinder::word_str(&w)).collect();
            write(out, "cylinders.csv", &format!("word\n{}\n", words.join("\n")))?;
        }
        BuiltSpace::Planar(space) => {
            summary.push_str(&format!("cells: {}\npieces: {}\npoints: {}\n", space.cell_count(), space.pieces.len(), space.points.len()));
            let landmarks: Vec<&str> = space.landmarks.keys().map(String::as_str).collect();
            summary.push_str(&format!("landmarks: {}\n", landmarks.join(" ")));
            write(out, "cells.csv", &cells_csv(&space))?;
            write(out, "space.svg", &render(&space, &[], None))?;
            if let Some(m) = &cfg.map {
                let map = build_named_map(&space, m)?;
                map.validate(&space)?;
                let g = transition_graph(&space, &map, DEFAULT_SAMPLES, None)?;
                summary.push_str(&format!("map: {}\nrho: {}\nedges: {}\n", map_label(m), g.rho, g.edge_count()));
                write(out, "graph.csv", &g.to_csv(|c| space.cell_label(c)))?;
            }
        }
    }
    write(out, "config.toml", &cfg.to_toml()?)?;
    write(out, "summary.txt", &summary)?;
    print!("{summary}");
    Ok(())
}

fn default_eps(space: &Space, eps: Option<f64>) -> f64 {
    eps.unwrap_or(if space.pieces.is_empty() { 0.05 } else { 2.0 * space.mesh() })
}

fn report_text(cfg: &Config, r: &AlphaReport, members: usize) -> String {
    let mut out = format!(
        "space: {}\nmap: {}\nmethod: {}\nbasepoint: {:?}\n",
        cfg.space.kind,
        cfg.map.as_ref().map(map_label).unwrap_or_default(),
        r.method,
        r.basepoint
    );
    for (k, v) in &r.params {
        out.push_str(&format!("param {k}: {v}\n"));
    }
    out.push_str(&format!("members: {members} cells\n"));
    out.push_str(&r.verdict_block());
    out
}

pub fn alpha(dir: &Path, basepoint: &str, engine: EngineArg, depth: usize, eps: Option<f64>, expect: Option<&str>) -> Result<()> {
    let (cfg, space, map) = load(dir)?;
    let map = need_map(map)?;
    let x = space.landmark_point(basepoint)?;
    let mut report = match engine {
        EngineArg::Enclosure => {
            let g = transition_graph(&space, &map, DEFAULT_SAMPLES, None)?;
            alpha_enclosure(&space, &g, x)
        }
        EngineArg::Exact => alpha_exact(&space, &map, x, depth, default_eps(&space, eps))?,
    };
    let members = report.member_cells(&space);
    if let Some(name) = expect {
        let (pass, detail) = within_collar(&space, &members, &space.landmark_cells(name)?);
        report.verdicts.push(Verdict { name: format!("matches {name}"), pass, detail });
    }
    let text = report_text(&cfg, &report, members.len());
    let out = dir.join(format!("alpha-{}-{engine:?}", slug(basepoint)).to_lowercase());
    write(&out, "report.txt", &text)?;
    write(&out, "members.csv", &members_csv(&space, &members))?;
    write(&out, "overlay.svg", &render(&space, expect.as_slice(), Some(&members)))?;
    print!("{text}");
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::verdict("a verdict failed"))
    }
}

pub fn facts(dir: &Path, basepoints: &[String], engine: EngineArg, depth: usize, eps: Option<f64>) -> Result<()> {
    let (_, space, map) = load(dir)?;
    let map = need_map(map)?;
    let xs = basepoints.iter().map(|b| space.landmark_point(b)).collect::<alpha_core::Result<Vec<_>>>()?;
    let (graph, engine) = match engine {
        EngineArg::Enclosure => (Some(transition_graph(&space, &map, DEFAULT_SAMPLES, None)?), Engine::Enclosure),
        EngineArg::Exact => (None, Engine::Exact { depth, eps: default_eps(&space, eps) }),
    };
    let table = check_facts(&space, &map, graph.as_ref(), &xs, engine)?;
    let text = table.to_string();
    write(dir, "facts.txt", &text)?;
    print!("{text}");
    if table.any_violated() {
        Err(CliError::verdict("a fact is violated"))
    } else {
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn survey(dir: &Path, landmarks: &[String], random: usize, seed: u64) -> Result<()> {
    let (_, space, _) = load(dir)?;
    let mut family = landmarks.iter().map(|l| space.landmark_set(l)).collect::<alpha_core::Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random {
        family.push(ClosedSet::cells(random_runs(&mut rng, space.cell_count())).named(format!("random#{i}")));
    }
    let rows = af_survey(&space, &family);
    let mut csv = String::from("set,method,map,basepoint,realized,detail\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(&r.set),
            r.method,
            csv_field(r.map.as_deref().unwrap_or("")),
            csv_field(r.basepoint.as_deref().unwrap_or("")),
            r.realized,
            csv_field(&r.detail)
        ));
    }
    let realized = rows.iter().filter(|r| r.realized).count();
    let text = format!("seed: {seed}\nsets: {}\nrealized: {realized}\n", rows.len());
    let out = dir.join("survey");
    write(&out, "survey.csv", &csv)?;
    write(&out, "report.txt", &text)?;
    print!("{text}");
    if realized == rows.len() {
        Ok(())
    } else {
        Err(CliError::verdict("some sets were not realized"))
    }
}

pub fn product_line(factors: &[PathBuf], random: usize, seed: u64, out: &Path) -> Result<()> {
    let spaces = factors.iter().map(|f| read_config(f).and_then(|c| planar(&c))).collect::<Result<Vec<_>>>()?;
    let prod = ProductSpace::new(spaces, DEFAULT_CELL_BUDGET)?;
    let n = alpha_core::topology::CellComplex::cell_count(&prod);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("set,size,z,lambda,z_label,brute_force_lines,agrees\n");
    let mut agree = 0;
    for i in 0..random {
        let density: f64 = rng.gen_range(0.05..0.95);
        let set: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
        let brute = bichromatic_lines_brute_force(&prod, &set);
        let (z, lambda, label, ok) = match find_bichromatic_line(&prod, &set) {
            Ok((z, l)) => (z.to_string(), l.to_string(), prod.cell_label(z), brute.contains(&(z, l))),
            Err(_) => (String::new(), String::new(), String::new(), brute.is_empty()),
        };
        agree += usize::from(ok);
        csv.push_str(&format!("{i},{},{z},{lambda},{},{},{ok}\n", set.len(), csv_field(&label), brute.len()));
    }
    let text = format!("seed: {seed}\nfactors: {}\ncells: {n}\nagreement: {agree}/{random}\n", factors.len());
    write(out, "lines.csv", &csv)?;
    write(out, "report.txt", &text)?;
    print!("{text}");
    if agree == random {
        Ok(())
    } else {
        Err(CliError::verdict("line search disagrees with brute force"))
    }
}

pub fn quotient(config: &Path, collapse: &str, name: &str, check: Option<QuotientCheck>, out: &Path) -> Result<()> {
    let cfg = read_config(config)?;
    let space = planar(&cfg)?;
    let q = quotient_collapse(&space, &space.landmark_cells(collapse)?, name)?;
    let mut text = format!("space: {}\ncollapsed: {collapse}\npoint: {name}\ncells: {} -> {}\n", space.name, space.cell_count(), q.cell_count());
    let result = match check {
        None => None,
        Some(QuotientCheck::Chain) => Some(check_chain_structure(&q, name)),
        Some(QuotientCheck::Sine) => {
            let pieces = match cfg.space.named()? {
                Some(NamedSpace::ExtendedSine { pieces }) | Some(NamedSpace::Sine { pieces }) => pieces,
                _ => return Err(CliError::config("the sine check needs a sine or extended sine space")),
            };
            let reference = build_named_space(&NamedSpace::Sine { pieces }, cfg.space.mesh()?)?;
            Some(matches_sine_curve(&q, &reference))
        }
    };
    if let Some(r) = &result {
        text.push_str(&format!("check: {}\n", if r.ok { "pass" } else { "FAIL" }));
        for f in &r.failures {
            text.push_str(&format!("  {f}\n"));
        }
    }
    write(out, "cells.csv", &cells_csv(&q))?;
    write(out, "quotient.svg", &render(&q, &[name], None))?;
    write(out, "report.txt", &text)?;
    print!("{text}");
    match result {
        Some(r) if !r.ok => Err(CliError::verdict("structure check failed")),
        _ => Ok(()),
    }
}

pub fn gallery(only: &[String], render_figures: bool, seed: u64, out: &Path) -> Result<()> {
    let keys = gallery::keys();
    if let Some(bad) = only.iter().find(|k| !keys.contains(&k.as_str()) && k.parse::<usize>().map_or(true, |n| n == 0 || n > keys.len())) {
        return Err(CliError::config(format!("unknown gallery row `{bad}`; rows: {}", keys.join(", "))));
    }
    let mut rows = gallery::run(only, seed);
    rows.sort_by_key(|r| r.id);
    for r in &rows {
        write(&out.join(slug(&r.key)), "row.txt", &format!("{r}\n"))?;
    }
    let table = gallery::summary_table(&rows, seed);
    write(out, "summary.txt", &table)?;
    if render_figures {
        for (file, svg) in gallery::figures()? {
            write(&out.join("figures"), &file, &svg)?;
        }
    }
    print!("{table}");
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(CliError::verdict("some gallery rows failed"))
    }
}
