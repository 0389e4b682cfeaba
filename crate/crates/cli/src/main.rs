//! Command-line front end: exact sheaf invariants, transform actions,
//! reduction to canonical form, stability verdicts, and moduli points,
//! with JSON output for scripting.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use nodal::json::{
    descriptor_from_json, moduli_point_to_json, parse_rational, DescriptorRepr, ModuliPointRepr,
};
use nodal::moduli::{component_dimension, moduli_point, stable_locus};
use nodal::reduction::{default_cap, orbit, orbit_edges, reduce};
use nodal::selftest::run_all;
use nodal::sheaves::{degree0_semistable, degree0_stable, graded_degree0, rank_one_stability};
use nodal::transforms::{apply_total, apply_twist, compose_total, parse_transform_sequence};
use nodal::{
    ChainCurve, ChainLineBundle, Curve, CycleCurve, CycleLineBundle, Error, HilbertClass,
    IndecomposableSheaf, JHFactor, KClass, LineBundle, ModuliPointE1, SheafDescriptor,
    StableLocusDescription, TransformSymbol,
};

#[derive(Parser)]
#[command(
    name = "nodal",
    version,
    about = "Exact invariants of sheaves on cycles and chains of projective lines"
)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a class (r, d) to its canonical terminal form.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Total polarization degree.
        #[arg(long)]
        h: i64,
        /// Exploration bound; defaults to r·h + |d|·h + h.
        #[arg(long)]
        cap: Option<i64>,
        /// Replay the reducing moves class by class.
        #[arg(long)]
        trace: bool,
    },
    /// Apply a comma-separated transform sequence to a class.
    Transform {
        /// Tokens: phi, phihat, psi, psihat, twist:d1,...,dN.
        sequence: String,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        /// Total polarization degree (reflection and translation sequences).
        #[arg(long)]
        h: Option<i64>,
        /// Component ranks (twist sequences act on K-classes).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        multirank: Option<Vec<i64>>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
    },
    /// Invariants and stability verdicts of a descriptor file.
    Classify {
        /// Path to a descriptor JSON file.
        descriptor: PathBuf,
    },
    /// Graded object of a semistable degree-zero descriptor file.
    Graded {
        descriptor: PathBuf,
    },
    /// Moduli point of a semistable degree-zero descriptor file.
    ModuliPoint {
        descriptor: PathBuf,
    },
    /// Cohomology dimensions of a line bundle.
    Cohomology {
        /// Number of components of the cycle.
        #[arg(long, conflicts_with = "chain")]
        n: Option<usize>,
        /// Number of components of the chain.
        #[arg(long)]
        chain: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        multidegree: Vec<i64>,
        /// Gluing constant p/q at the cycle-closing node (default 1).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// The bounded move graph of a class.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        cap: i64,
        /// Emit the graph in DOT format.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Describe the locus of stable degree-zero sheaves of a given rank.
    EnumerateStable {
        #[arg(long)]
        r: i64,
        /// Component degrees h_1,...,h_N of the cycle.
        #[arg(long, value_delimiter = ',')]
        polarization: Vec<i64>,
    },
    /// Run the acceptance criteria; nonzero exit on any violation.
    Selftest,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::domain(e.to_string())
    }
}

/// Maps errors in the ingestion phase to the malformed-input exit code.
fn ingest<T>(r: nodal::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::malformed(e.to_string()))
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn class_json(hc: HilbertClass) -> serde_json::Value {
    json!({"r": hc.r, "d": hc.d})
}

fn emit(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("report serializes")
    );
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking
    // mid-print (e.g. `nodal orbit --dot | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Reduce { r, d, h, cap, trace } => cmd_reduce(r, d, h, cap, trace, cli.json),
        Command::Transform {
            sequence,
            r,
            d,
            h,
            multirank,
            chi,
        } => cmd_transform(&sequence, r, d, h, multirank, chi, cli.json),
        Command::Classify { descriptor } => cmd_classify(&descriptor, cli.json),
        Command::Graded { descriptor } => cmd_graded(&descriptor, cli.json),
        Command::ModuliPoint { descriptor } => cmd_moduli_point(&descriptor, cli.json),
        Command::Cohomology {
            n,
            chain,
            multidegree,
            lambda,
        } => cmd_cohomology(n, chain, multidegree, lambda, cli.json),
        Command::Orbit { r, d, h, cap, dot } => cmd_orbit(r, d, h, cap, dot, cli.json),
        Command::EnumerateStable { r, polarization } => {
            cmd_enumerate_stable(r, polarization, cli.json)
        }
        Command::Selftest => cmd_selftest(cli.json),
    }
}

fn cmd_reduce(
    r: i64,
    d: i64,
    h: i64,
    cap: Option<i64>,
    trace: bool,
    json_out: bool,
) -> Result<(), Failure> {
    let input = HilbertClass::new(r, d);
    let cap = cap.unwrap_or_else(|| default_cap(input, h));
    let res = reduce(input, h, cap)?;
    let moves: Vec<String> = res.trace.iter().map(ToString::to_string).collect();
    if json_out {
        emit(json!({
            "input": class_json(input),
            "h": h,
            "cap": cap,
            "terminal": {"r": res.terminal.r(), "d": res.terminal.d()},
            "visited": res.visited,
            "capped": res.capped,
            "trace": moves,
        }));
        return Ok(());
    }
    println!("input {input}  h = {h}  cap = {cap}");
    println!("terminal {}", res.terminal);
    println!(
        "visited {} states ({})",
        res.visited,
        if res.capped { "capped" } else { "complete" }
    );
    if moves.is_empty() {
        println!("trace (already terminal)");
    } else {
        println!("trace {}", moves.join(", "));
    }
    if trace {
        let mut class = input;
        println!("walk {class}");
        for t in &res.trace {
            class = apply_total(t, class, h)?;
            println!("  {t} -> {class}");
        }
    }
    Ok(())
}

fn cmd_transform(
    sequence: &str,
    r: Option<i64>,
    d: Option<i64>,
    h: Option<i64>,
    multirank: Option<Vec<i64>>,
    chi: Option<i64>,
    json_out: bool,
) -> Result<(), Failure> {
    let symbols = ingest(parse_transform_sequence(sequence))?;
    let twists = symbols
        .iter()
        .filter(|t| matches!(t, TransformSymbol::Twist(_)))
        .count();
    if twists > 0 && twists < symbols.len() {
        return Err(Error::TwistInTotalSequence.into());
    }
    if twists > 0 {
        let (Some(multirank), Some(chi)) = (multirank, chi) else {
            return Err(Failure::malformed(
                "twist sequences act on K-classes; pass --multirank and --chi",
            ));
        };
        let mut kc = KClass::new(multirank, chi);
        for t in &symbols {
            if let TransformSymbol::Twist(md) = t {
                kc = apply_twist(md, &kc)?;
            }
        }
        if json_out {
            emit(json!({"multirank": kc.multirank, "chi": kc.chi}));
        } else {
            println!("result {kc}");
        }
        return Ok(());
    }
    let (Some(r), Some(d), Some(h)) = (r, d, h) else {
        return Err(Failure::malformed(
            "reflection and translation sequences act on classes; pass --r, --d and --h",
        ));
    };
    let out = compose_total(&symbols, HilbertClass::new(r, d), h)?;
    if json_out {
        emit(json!({"result": class_json(out), "h": h}));
    } else {
        println!("result {out}");
    }
    Ok(())
}

fn describe_summand(x: &IndecomposableSheaf) -> String {
    match x {
        IndecomposableSheaf::Vb { cover, m, bundle } => {
            let mut s = String::new();
            if *cover > 1 {
                s.push_str(&format!("pushforward from the {cover}-fold cover, "));
            }
            if *m > 1 {
                s.push_str(&format!("multiplicity {m}, "));
            }
            if s.is_empty() {
                s.push_str("line bundle, ");
            }
            s.push_str(&format!(
                "multidegree {:?}, gluing {}",
                bundle.multidegree(),
                bundle.gluing()
            ));
            s
        }
        IndecomposableSheaf::Nlf { map, bundle } => format!(
            "chain sheaf of length {} starting on C{}, multidegree {:?}",
            map.length(),
            map.start() + 1,
            bundle.multidegree()
        ),
    }
}

/// Semistability at degree zero, treating a summand of nonzero Euler
/// characteristic as a slope mismatch rather than an error.
fn summand_semistable(x: &IndecomposableSheaf, pol: &[i64]) -> Result<bool, Failure> {
    match degree0_semistable(x, pol) {
        Ok(v) => Ok(v),
        Err(Error::NonzeroEuler { .. }) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn factor_json(f: &JHFactor) -> serde_json::Value {
    match f {
        JHFactor::MinusOneOnComponent(i) => json!({"kind": "minus_one", "component": i}),
        JHFactor::StableLineBundle(l) => {
            json!({"kind": "line_bundle", "lambda": {"num": *l.numer(), "den": *l.denom()}})
        }
    }
}

fn load_descriptor(path: &PathBuf) -> Result<SheafDescriptor, Failure> {
    ingest(descriptor_from_json(&read_file(path)?))
}

fn cmd_classify(path: &PathBuf, json_out: bool) -> Result<(), Failure> {
    let d = load_descriptor(path)?;
    let (kc, _) = d.invariants()?;
    let hilbert = d.hilbert_class()?;
    let defect = d.locally_free_defect()?;
    let pol = d.host().polarization().to_vec();
    let n = d.host().n_components();

    let mut per_summand: Vec<Option<String>> = Vec::new();
    let mut verdict = String::new();
    let mut graded: Option<Vec<JHFactor>> = None;
    let mut point: Option<ModuliPointE1> = None;
    if kc.chi == 0 {
        let mut all = true;
        for x in d.summands() {
            let ok = summand_semistable(x, &pol)?;
            all &= ok;
            per_summand.push(Some(
                if ok { "semistable" } else { "not semistable" }.to_string(),
            ));
        }
        if !all {
            verdict.push_str("unstable");
        } else {
            graded = Some(graded_degree0(&d)?);
            if n >= 2 {
                let stable =
                    d.summands().len() == 1 && degree0_stable(&d.summands()[0])?;
                verdict.push_str(if stable { "stable" } else { "strictly semistable" });
                if kc.balanced_rank().is_some() {
                    point = Some(moduli_point(&d)?);
                }
            } else {
                verdict.push_str("semistable");
            }
        }
    } else {
        verdict.push_str("undecided (nonzero Euler characteristic)");
        for x in d.summands() {
            let applicable = !matches!(x, IndecomposableSheaf::Vb { m, .. } if *m > 1);
            per_summand.push(if applicable {
                Some(rank_one_stability(x, &pol)?.to_string())
            } else {
                None
            });
        }
    }

    if json_out {
        emit(json!({
            "descriptor": serde_json::to_value(DescriptorRepr::of(&d)).expect("serializes"),
            "multirank": kc.multirank,
            "chi": kc.chi,
            "hilbert": class_json(hilbert),
            "locally_free": d.is_locally_free(),
            "defect": defect,
            "summands": d
                .summands()
                .iter()
                .zip(&per_summand)
                .map(|(x, v)| json!({"description": describe_summand(x), "verdict": v}))
                .collect::<Vec<_>>(),
            "verdict": verdict,
            "graded": graded.as_ref().map(|fs| fs.iter().map(factor_json).collect::<Vec<_>>()),
            "moduli_point": point
                .as_ref()
                .map(|p| serde_json::to_value(ModuliPointRepr::of(p)).expect("serializes")),
        }));
        return Ok(());
    }

    println!("curve: cycle of {n} components, polarization {pol:?}");
    println!("summands: {}", d.summands().len());
    for (i, x) in d.summands().iter().enumerate() {
        match &per_summand[i] {
            Some(v) => println!("  {}: {} [{v}]", i + 1, describe_summand(x)),
            None => println!("  {}: {}", i + 1, describe_summand(x)),
        }
    }
    println!("multirank {:?}  chi {}", kc.multirank, kc.chi);
    println!("hilbert class {hilbert}");
    if d.is_locally_free() {
        println!("locally free: yes");
    } else {
        println!("locally free: no (defect {defect})");
    }
    println!("verdict: {verdict}");
    if let Some(factors) = &graded {
        let joined: Vec<String> = factors.iter().map(ToString::to_string).collect();
        println!("graded: {}", joined.join(" + "));
    }
    if let Some(p) = &point {
        println!("moduli point: {p}");
    }
    Ok(())
}

fn cmd_graded(path: &PathBuf, json_out: bool) -> Result<(), Failure> {
    let d = load_descriptor(path)?;
    let factors = graded_degree0(&d)?;
    if json_out {
        emit(json!({
            "factors": factors.iter().map(factor_json).collect::<Vec<_>>(),
        }));
    } else {
        let joined: Vec<String> = factors.iter().map(ToString::to_string).collect();
        println!("{}", joined.join(" + "));
    }
    Ok(())
}

fn cmd_moduli_point(path: &PathBuf, json_out: bool) -> Result<(), Failure> {
    let d = load_descriptor(path)?;
    let p = moduli_point(&d)?;
    if json_out {
        println!("{}", moduli_point_to_json(&p));
    } else {
        println!("{p}");
    }
    Ok(())
}

fn cmd_cohomology(
    n: Option<usize>,
    chain: Option<usize>,
    multidegree: Vec<i64>,
    lambda: Option<String>,
    json_out: bool,
) -> Result<(), Failure> {
    let (lb, curve) = match (n, chain) {
        (Some(n), None) => {
            if multidegree.len() != n {
                return Err(Failure::malformed(format!(
                    "expected {n} component degrees, got {}",
                    multidegree.len()
                )));
            }
            let gluing = ingest(parse_rational(lambda.as_deref().unwrap_or("1")))?;
            (
                LineBundle::Cycle(ingest(CycleLineBundle::new(multidegree, gluing))?),
                Curve::Cycle(ingest(CycleCurve::with_unit_polarization(n))?),
            )
        }
        (None, Some(k)) => {
            if lambda.is_some() {
                return Err(Failure::malformed(
                    "gluing constants apply to cycles only; drop --lambda with --chain",
                ));
            }
            if multidegree.len() != k {
                return Err(Failure::malformed(format!(
                    "expected {k} component degrees, got {}",
                    multidegree.len()
                )));
            }
            (
                LineBundle::Chain(ChainLineBundle::new(multidegree)),
                Curve::Chain(ingest(ChainCurve::new(k))?),
            )
        }
        _ => {
            return Err(Failure::malformed("pass exactly one of --n or --chain"));
        }
    };
    let (h0, h1) = nodal::invariants::line_bundle_cohomology(&lb, &curve)?;
    if json_out {
        emit(json!({"h0": h0, "h1": h1}));
    } else {
        println!("h0 = {h0}  h1 = {h1}");
    }
    Ok(())
}

fn cmd_orbit(r: i64, d: i64, h: i64, cap: i64, dot: bool, json_out: bool) -> Result<(), Failure> {
    let input = HilbertClass::new(r, d);
    let res = reduce(input, h, cap)?;
    let states = orbit(input, h, cap)?;
    let edges = orbit_edges(input, h, cap)?;
    if dot {
        println!("digraph orbit {{");
        for s in &states {
            println!("  \"{s}\";");
        }
        for (a, v, b) in &edges {
            println!("  \"{a}\" -> \"{b}\" [label=\"{v}\"];");
        }
        println!("}}");
        return Ok(());
    }
    if json_out {
        emit(json!({
            "cap": cap,
            "capped": res.capped,
            "terminal": {"r": res.terminal.r(), "d": res.terminal.d()},
            "states": states
                .iter()
                .map(|s| json!({"r": s.r(), "d": s.d()}))
                .collect::<Vec<_>>(),
            "edges": edges
                .iter()
                .map(|(a, v, b)| json!({
                    "from": {"r": a.r(), "d": a.d()},
                    "v": v,
                    "to": {"r": b.r(), "d": b.d()},
                }))
                .collect::<Vec<_>>(),
        }));
        return Ok(());
    }
    println!(
        "{} states at cap {cap} ({})",
        states.len(),
        if res.capped { "capped" } else { "complete" }
    );
    println!("terminal {}", res.terminal);
    for s in &states {
        println!("  {s}");
    }
    println!("{} moves", edges.len());
    for (a, v, b) in &edges {
        println!("  {a} -[{v}]-> {b}");
    }
    Ok(())
}

fn cmd_enumerate_stable(r: i64, polarization: Vec<i64>, json_out: bool) -> Result<(), Failure> {
    let curve = ingest(CycleCurve::new(polarization.clone()))?;
    let locus = stable_locus(r, &curve)?;
    let n = curve.n_components();
    let witness_bundle = || -> Result<SheafDescriptor, Failure> {
        Ok(SheafDescriptor::new(
            curve.clone(),
            vec![IndecomposableSheaf::vb(
                1,
                1,
                CycleLineBundle::new(vec![0; n], parse_rational("1")?)?,
            )?],
        )?)
    };
    let witness_on = |i: usize| -> Result<SheafDescriptor, Failure> {
        Ok(SheafDescriptor::new(
            curve.clone(),
            vec![IndecomposableSheaf::nlf(
                nodal::ChainMap::new(1, i, n)?,
                ChainLineBundle::new(vec![-1]),
            )?],
        )?)
    };
    let (kind, components, multiranks, witnesses) = match &locus {
        StableLocusDescription::KStarComponent => (
            "torus",
            Vec::new(),
            vec![vec![1i64; n]],
            vec![witness_bundle()?],
        ),
        StableLocusDescription::IsolatedPoints(ids) => {
            let mut multiranks = Vec::new();
            let mut witnesses = Vec::new();
            for &i in ids {
                let mut mr = vec![0i64; n];
                mr[i] = 1;
                multiranks.push(mr);
                witnesses.push(witness_on(i)?);
            }
            ("isolated", ids.clone(), multiranks, witnesses)
        }
        StableLocusDescription::Empty => ("empty", Vec::new(), Vec::new(), Vec::new()),
    };
    let dimensions: Vec<i64> = multiranks
        .iter()
        .map(|mr| component_dimension(mr, &curve))
        .collect::<nodal::Result<_>>()?;
    if json_out {
        emit(json!({
            "rank": r,
            "polarization": curve.polarization(),
            "locus": kind,
            "components": components,
            "multiranks": multiranks,
            "dimensions": dimensions,
            "witnesses": witnesses
                .iter()
                .map(|w| serde_json::to_value(DescriptorRepr::of(w)).expect("serializes"))
                .collect::<Vec<_>>(),
        }));
        return Ok(());
    }
    println!(
        "stable locus for rank {r} on the {n}-component cycle with polarization {:?}: {locus}",
        curve.polarization()
    );
    for ((mr, dim), w) in multiranks.iter().zip(&dimensions).zip(&witnesses) {
        println!(
            "  multirank {mr:?}, dimension {dim}, witness: {}",
            describe_summand(&w.summands()[0])
        );
    }
    Ok(())
}

fn cmd_selftest(json_out: bool) -> Result<(), Failure> {
    let reports = run_all();
    let all_passed = reports.iter().all(|r| r.passed);
    if json_out {
        emit(json!(reports
            .iter()
            .map(|r| json!({
                "index": r.index,
                "name": r.name,
                "passed": r.passed,
                "millis": r.millis as u64,
                "details": r.details,
            }))
            .collect::<Vec<_>>()));
    } else {
        for r in &reports {
            println!(
                "criterion {:>2} {:<28} {} ({} ms) {}",
                r.index,
                r.name,
                if r.passed { "pass" } else { "FAIL" },
                r.millis,
                r.details
            );
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::domain("self-test failed"))
    }
}
