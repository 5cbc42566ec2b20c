//! Command implementations. Each returns the process exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use pva_core::deform::{self, DeformError, PipelineOptions, Verdict};
use pva_core::diffalg::{DiffPoly, Space};
use pva_core::lambda::{check_all, BracketTable};
use pva_core::models::{
    divfree_commutator, epdiff_bracket, epdiff_evolution, epdiff_expected, euler_bracket, field,
    reduction_consistency_check, vector_field_jacobi, PolyStreamFunction,
};
use pva_core::par::Execution;
use pva_core::sampling::{self, SampleBounds};

use crate::parse::parse_bracket_file;
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONTRIVIAL: i32 = 3;
pub const EXIT_UNDETERMINED: i32 = 4;

/// A resolved `--bracket` argument.
pub struct Loaded {
    pub label: String,
    pub names: Vec<String>,
    pub table: BracketTable,
}

/// `euler`, `epdiff1`, `epdiff2`, `file:PATH` or a bare path.
pub fn load_bracket(source: &str) -> Result<Loaded, String> {
    match source {
        "euler" => Ok(Loaded {
            label: "euler".into(),
            names: vec!["w".into()],
            table: euler_bracket().table,
        }),
        "epdiff1" | "epdiff2" => {
            let dim = if source == "epdiff1" { 1 } else { 2 };
            let b = epdiff_bracket(dim).map_err(|e| e.to_string())?;
            let names = if dim == 1 {
                vec!["p".into()]
            } else {
                (1..=dim).map(|k| format!("p{k}")).collect()
            };
            Ok(Loaded {
                label: source.into(),
                names,
                table: b.table,
            })
        }
        _ => {
            let path = Path::new(source.strip_prefix("file:").unwrap_or(source));
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let def = parse_bracket_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(Loaded {
                label: path.display().to_string(),
                names: def.names,
                table: def.table,
            })
        }
    }
}

pub fn verify(source: &str, seed: u64, samples: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let b = match load_bracket(source) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut rng = sampling::rng(seed);
    let polys: Vec<DiffPoly> = (0..samples)
        .map(|_| sampling::random_diffpoly(b.table.space(), &mut rng, SampleBounds::default()))
        .collect();
    let _ = writeln!(out, "bracket {}:", b.label);
    let mut ok = true;
    for r in check_all(&b.table, &polys, Execution::default()) {
        if r.passed() {
            let _ = writeln!(out, "  {}: pass ({} cases)", r.axiom, r.checked);
        } else {
            ok = false;
            let _ = writeln!(out, "  {}: FAIL ({} of {} cases)", r.axiom, r.failures.len(), r.checked);
            for f in r.failures.iter().take(3) {
                let _ = writeln!(out, "    {f}");
            }
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

pub struct DeformArgs {
    pub source: String,
    pub order: u32,
    pub out: Option<PathBuf>,
    pub quiet: bool,
    pub no_validate: bool,
    pub exec: Execution,
}

fn deform_exit(e: &DeformError) -> i32 {
    match e {
        DeformError::NotScalar(_) | DeformError::InvalidDegree(_) | DeformError::DegenerateBase(_) => EXIT_USAGE,
        DeformError::ProlongationBound { .. } => EXIT_UNDETERMINED,
        _ => EXIT_MATH,
    }
}

pub fn deform(args: &DeformArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let b = match load_bracket(&args.source) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let opts = PipelineOptions {
        exec: args.exec,
        skip_validation: args.no_validate,
        ..Default::default()
    };
    let report = match deform::run(&b.table, args.order, &opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return deform_exit(&e);
        }
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, Report::from(&report).to_json()) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if !args.quiet {
        let _ = writeln!(out, "deformations of {} at order {}", b.label, report.order);
        let _ = writeln!(out, "  raw parameters:      {}", report.raw_param_count);
        let _ = writeln!(out, "  after skewsymmetry:  {}", report.skew_param_count);
        let _ = writeln!(out, "  equations:           {}", report.equation_count);
        let _ = writeln!(out, "  solution dimension:  {}", report.solution_dim);
        if !report.free_symbols.is_empty() {
            let _ = writeln!(out, "  free: {}", report.free_symbols.join(", "));
        }
        for (name, deg) in &report.partially_determined {
            let _ = writeln!(out, "  {name} is a polynomial of degree {deg} in the generator");
        }
        let _ = writeln!(out, "  verdict: {}", report.verdict);
        for w in &report.miura_witness {
            let _ = writeln!(out, "    {w}");
        }
        if let Some(o) = &report.obstruction {
            let _ = writeln!(out, "  obstruction: {o}");
        }
    }
    match report.verdict {
        Verdict::Trivial => EXIT_OK,
        Verdict::Nontrivial => EXIT_NONTRIVIAL,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    }
}

fn single_term(space: Space, m: &pva_core::diffalg::Monomial, c: &pva_core::diffalg::Rational) -> DiffPoly {
    let mut p = DiffPoly::zero(space);
    p.add_term(m.clone(), c.clone());
    p
}

pub fn epdiff(dim: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if !(1..=2).contains(&dim) {
        let _ = writeln!(err, "error: unsupported dimension {dim}, expected 1 or 2");
        return EXIT_USAGE;
    }
    let (derived, expected) = match (epdiff_evolution(dim), epdiff_expected(dim)) {
        (Ok(d), Ok(e)) => (d, e),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let names: Vec<String> = if dim == 1 {
        vec!["m".into()]
    } else {
        (1..=dim).map(|k| format!("m{k}")).collect()
    };
    let mut ok = true;
    for (i, (d, e)) in derived.iter().zip(&expected).enumerate() {
        let _ = writeln!(out, "{}_t = {}", names[i], d.display_with(&names));
        let have: BTreeMap<_, _> = d.terms().collect();
        let want: BTreeMap<_, _> = e.terms().collect();
        for (m, c) in &want {
            let term = single_term(d.space(), m, c);
            let status = match have.get(m) {
                Some(x) if x == c => "ok",
                _ => {
                    ok = false;
                    "MISMATCH"
                }
            };
            let _ = writeln!(out, "  {}: {status}", term.display_with(&names));
        }
        for (m, c) in &have {
            if !want.contains_key(m) {
                ok = false;
                let _ = writeln!(
                    out,
                    "  {}: UNEXPECTED",
                    single_term(d.space(), m, c).display_with(&names)
                );
            }
        }
    }
    let _ = writeln!(out, "{}", if ok { "match" } else { "mismatch" });
    if ok {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

pub fn reduce_check(seed: u64, trials: usize, orientation: i8, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if trials == 0 {
        let _ = writeln!(err, "error: --trials must be at least 1");
        return EXIT_USAGE;
    }
    if orientation != 1 && orientation != -1 {
        let _ = writeln!(err, "error: --orientation must be 1 or -1");
        return EXIT_USAGE;
    }
    let mut ok = true;
    let r = reduction_consistency_check(orientation);
    if r.equal {
        let _ = writeln!(out, "reduction (orientation {orientation}): matches the Euler bracket");
    } else {
        ok = false;
        let how = if r.opposite_sign {
            "sign mismatch, derived = -euler"
        } else {
            "entries differ"
        };
        let _ = writeln!(out, "reduction (orientation {orientation}): FAIL, {how}");
        let _ = writeln!(out, "  derived: {}", r.derived);
    }

    let mut rng = sampling::rng(seed);
    let mut failed = 0;
    for t in 0..trials {
        let phi = PolyStreamFunction::random(&mut rng, 4);
        let psi = PolyStreamFunction::random(&mut rng, 4);
        let rho = PolyStreamFunction::random(&mut rng, 4);
        let c = divfree_commutator(&phi, &psi, orientation);
        let z = field(&rho, orientation);
        let jac = vector_field_jacobi(&c.x, &c.y, &z);
        let pass = c.divergence_free() && c.chi_matches() && jac.iter().all(|p| p.is_zero());
        if !pass {
            failed += 1;
            if failed <= 3 {
                let _ = writeln!(out, "  trial {t}: FAIL with phi = {phi}, psi = {psi}");
            }
        }
    }
    let _ = writeln!(
        out,
        "commutators: {}/{trials} divergence-free with matching stream function (seed {seed})",
        trials - failed
    );
    if failed > 0 {
        ok = false;
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}
