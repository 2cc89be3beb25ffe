//! Implementations of the CLI subcommands. Each file-writing command returns
//! a [`ManifestDraft`] so the caller can pair the outputs with a manifest.

use crate::output::{self, ManifestDraft};
use crate::{CatalogArg, ClassesArgs, CliError, DomainArg, GlobalOpts, SimulateArgs, SurfaceArgs};
use dimgames_core::reference;
use dimgames_core::{
    basis_classes, chsh_closed_form, compute_surface, distinguishers_to_csv, find_max,
    format_grid_angle, pair_classes, parse_grid_angle, run_protocol, AngleGridPoint,
    CatalogBuilder, DistinguisherRecord, GameSpec, ProtocolConfig, RoundedKey, RoundingMode,
    ScoringTable, TruthTable2, TruthTable3, TIGHT_TIE_TOL,
};
use serde_json::json;

type CommandResult = Result<Option<ManifestDraft>, CliError>;

fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

fn parse_table2(token: &str) -> Result<TruthTable2, CliError> {
    token.parse::<TruthTable2>().map_err(usage)
}

fn parse_table3(token: &str) -> Result<TruthTable3, CliError> {
    token.parse::<TruthTable3>().map_err(usage)
}

fn parse_angle_index(token: &str) -> Result<u8, CliError> {
    parse_grid_angle(token).map_err(usage)
}

fn check_dim(dim: usize) -> Result<(), CliError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "invalid value `{dim}` for --dim: expected 2 or 3"
        )))
    }
}

/// Resolves optional angle tokens against the defaults (pi/8, 15pi/8).
fn angle_pair(
    theta0: &Option<String>,
    theta1: &Option<String>,
) -> Result<AngleGridPoint, CliError> {
    let i0 = match theta0 {
        Some(token) => parse_angle_index(token)?,
        None => 4,
    };
    let i1 = match theta1 {
        Some(token) => parse_angle_index(token)?,
        None => 60,
    };
    Ok(AngleGridPoint::new(i0, i1).expect("parsed indices are in range"))
}

/// Builds a game from CLI tokens, defaulting to AND scored by XOR (or its
/// dimension-3 embedding).
fn game_from_args(
    dim: usize,
    f: &Option<String>,
    g: &Option<String>,
) -> Result<GameSpec, CliError> {
    check_dim(dim)?;
    let f = match f {
        Some(token) => parse_table2(token)?,
        None => TruthTable2::AND,
    };
    let spec = if dim == 2 {
        let g = match g {
            Some(token) => parse_table2(token)?,
            None => TruthTable2::XOR,
        };
        GameSpec::dim2(f, g)
    } else {
        let g = match g {
            Some(token) => parse_table3(token)?,
            None => TruthTable3::EMBEDDED_XOR,
        };
        GameSpec::dim3(f, g)
    };
    spec.map_err(|err| CliError::Usage(format!("invalid game for --f/--g: {err}")))
}

fn render_point(point: AngleGridPoint) -> String {
    let (a0, a1) = point.angle_strings();
    format!("({a0}, {a1})")
}

fn render_points(points: &[AngleGridPoint]) -> String {
    points
        .iter()
        .map(|&p| render_point(p))
        .collect::<Vec<_>>()
        .join(", ")
}

fn scoring_encoding(g: &ScoringTable) -> u16 {
    match g {
        ScoringTable::Dim2(t) => u16::from(t.encoding()),
        ScoringTable::Dim3(t) => t.encoding(),
    }
}

fn csv_bytes(writer: csv::Writer<Vec<u8>>) -> Vec<u8> {
    writer.into_inner().expect("in-memory csv flushes")
}

pub fn chsh(_global: &GlobalOpts) -> CommandResult {
    let spec = GameSpec::dim2(TruthTable2::AND, TruthTable2::XOR).expect("valid game");
    let surface = compute_surface(&spec);
    let sweep = find_max(&surface, TIGHT_TIE_TOL);

    let closed: Vec<(AngleGridPoint, f64)> = AngleGridPoint::all()
        .map(|p| (p, chsh_closed_form(p.theta0(), p.theta1())))
        .collect();
    let closed_max = closed
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let closed_argmax: Vec<AngleGridPoint> = closed
        .iter()
        .filter(|&&(_, v)| closed_max - v <= TIGHT_TIE_TOL)
        .map(|&(p, _)| p)
        .collect();
    let worst = closed
        .iter()
        .map(|&(p, v)| (v - surface.value_at(p)).abs())
        .fold(0.0, f64::max);

    println!("CHSH game: f = [0,0,0,1] (AND), g = [0,1,1,0] (XOR), dimension 2");
    println!(
        "analytic quantum value (2+sqrt(2))/4 = {:?}",
        (2.0 + 2.0_f64.sqrt()) / 4.0
    );
    println!("closed-form maximum over the 64x64 grid = {closed_max:?}");
    println!(
        "  argmax ({} points at {TIGHT_TIE_TOL:e}): {}",
        closed_argmax.len(),
        render_points(&closed_argmax)
    );
    println!(
        "Born-rule sweep maximum over the grid   = {:?}",
        sweep.max_value
    );
    println!(
        "  argmax ({} points at {TIGHT_TIE_TOL:e}): {}",
        sweep.argmax.len(),
        render_points(&sweep.argmax)
    );
    println!("largest |closed-form - sweep| over all 4096 points = {worst:.3e}");
    Ok(None)
}

pub fn table(global: &GlobalOpts, number: u8) -> CommandResult {
    if !(1..=5).contains(&number) {
        return Err(CliError::Usage(format!(
            "invalid value `{number}` for table: expected 1-5"
        )));
    }
    let mode = RoundingMode::from(global.rounding);
    let decimals = global.precision;
    let builder = CatalogBuilder::new()?;

    let (csv_body, json_value) = match number {
        1 => table1_payload(&builder, decimals, mode),
        2 => table2_payload(&builder, decimals, mode)?,
        n => catalog_table_payload(&builder, n, global.threshold, decimals, mode)?,
    };

    let csv_path = output::prepare(&global.out, &format!("table{number}.csv"))?;
    let json_path = global.out.join(format!("table{number}.json"));
    output::write_file(&csv_path, &csv_body)?;
    output::write_file(&json_path, &output::to_json_bytes(&json_value))?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());

    let mut params = json!({
        "number": number,
        "precision": decimals,
        "rounding": global.rounding.label(),
    });
    if number == 5 {
        params["threshold"] = json!(global.threshold);
    }
    Ok(Some(ManifestDraft {
        command: "table",
        params,
        rng_seed: None,
        outputs: vec![csv_path, json_path],
        manifest_path: global.out.join(format!("table{number}.manifest.json")),
    }))
}

fn table1_payload(
    builder: &CatalogBuilder,
    decimals: u8,
    mode: RoundingMode,
) -> (Vec<u8>, serde_json::Value) {
    let groups = builder.table1(decimals, mode);
    let concordance = reference::check_table1(builder);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["probability", "count"])
        .expect("in-memory write");
    for class in &groups {
        w.write_record([class.key.to_string(), class.members.len().to_string()])
            .expect("in-memory write");
    }
    let value = json!({
        "decimals": decimals,
        "rounding": mode,
        "groups": groups,
        "concordance": concordance,
    });
    (csv_bytes(w), value)
}

fn table2_payload(
    builder: &CatalogBuilder,
    decimals: u8,
    mode: RoundingMode,
) -> Result<(Vec<u8>, serde_json::Value), CliError> {
    let stratum = builder.max_stratum(3, decimals, mode)?;
    let concordance = reference::check_table2(builder);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["f", "g3", "theta0", "theta1", "probability"])
        .expect("in-memory write");
    for row in &stratum {
        let (a0, a1) = row.canonical_argmax.angle_strings();
        w.write_record([
            row.spec.f().to_string(),
            row.spec.g().to_string(),
            a0,
            a1,
            RoundedKey::of(row.max_value, decimals, mode).to_string(),
        ])
        .expect("in-memory write");
    }
    let value = json!({
        "decimals": decimals,
        "rounding": mode,
        "rows": stratum,
        "concordance": concordance,
    });
    Ok((csv_bytes(w), value))
}

fn catalog_table_payload(
    builder: &CatalogBuilder,
    number: u8,
    threshold: f64,
    decimals: u8,
    mode: RoundingMode,
) -> Result<(Vec<u8>, serde_json::Value), CliError> {
    let (records, concordance) = match number {
        3 => (
            builder.build_d1(decimals, mode),
            reference::check_table3(builder),
        ),
        4 => (
            builder.build_d2(decimals, mode),
            reference::check_table4(builder),
        ),
        _ => (
            builder.build_d3(threshold, decimals, mode)?,
            reference::check_table5(builder, threshold)?,
        ),
    };
    let mut value = json!({
        "decimals": decimals,
        "rounding": mode,
        "records": records,
        "concordance": concordance,
    });
    if number == 5 {
        value["threshold"] = json!(threshold);
    }
    Ok((
        distinguishers_to_csv(&records, decimals, mode).into_bytes(),
        value,
    ))
}

pub fn surface(global: &GlobalOpts, args: &SurfaceArgs) -> CommandResult {
    let spec = game_from_args(args.dim, &args.f, &args.g)?;
    let surface = compute_surface(&spec);
    let sweep = find_max(&surface, TIGHT_TIE_TOL);
    let stem = format!(
        "surface_d{}_f{}_g{}",
        args.dim,
        spec.f().encoding(),
        scoring_encoding(&spec.g())
    );

    let csv_path = output::prepare(&global.out, &format!("{stem}.csv"))?;
    let json_path = global.out.join(format!("{stem}.json"));
    output::write_file(&csv_path, surface.to_csv_string().as_bytes())?;
    let summary = json!({
        "spec": sweep.spec,
        "min_value": surface.min_value(),
        "max_value": sweep.max_value,
        "argmax": sweep.argmax,
        "argmax_angles": sweep.argmax.iter().map(|&p| render_point(p)).collect::<Vec<_>>(),
        "canonical_argmax": sweep.canonical_argmax,
        "canonical_angles": render_point(sweep.canonical_argmax),
    });
    output::write_file(&json_path, &output::to_json_bytes(&summary))?;
    println!(
        "wrote {} and {} (max {:?} at {})",
        csv_path.display(),
        json_path.display(),
        sweep.max_value,
        render_point(sweep.canonical_argmax)
    );

    Ok(Some(ManifestDraft {
        command: "surface",
        params: json!({
            "dim": args.dim,
            "f": spec.f(),
            "g": spec.g(),
        }),
        rng_seed: None,
        outputs: vec![csv_path, json_path],
        manifest_path: global.out.join(format!("{stem}.manifest.json")),
    }))
}

pub fn classes(global: &GlobalOpts, args: &ClassesArgs) -> CommandResult {
    let mode = RoundingMode::from(global.rounding);
    let decimals = global.precision;
    let (stem, params, csv_body, json_value) = match args.kind {
        1 => classes1_payload(args, decimals, mode)?,
        2 => classes2_payload(args, decimals, mode)?,
        3 => classes3_payload(args, decimals, mode)?,
        k => {
            return Err(CliError::Usage(format!(
                "invalid value `{k}` for kind: expected 1, 2, or 3"
            )))
        }
    };
    let csv_path = output::prepare(&global.out, &format!("{stem}.csv"))?;
    let json_path = global.out.join(format!("{stem}.json"));
    output::write_file(&csv_path, &csv_body)?;
    output::write_file(&json_path, &output::to_json_bytes(&json_value))?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(Some(ManifestDraft {
        command: "classes",
        params,
        rng_seed: None,
        outputs: vec![csv_path, json_path],
        manifest_path: global.out.join(format!("{stem}.manifest.json")),
    }))
}

type ClassesPayload = (String, serde_json::Value, Vec<u8>, serde_json::Value);

/// Kind 1: grid points of one fixed game, tidy CSV (one row per point).
fn classes1_payload(
    args: &ClassesArgs,
    decimals: u8,
    mode: RoundingMode,
) -> Result<ClassesPayload, CliError> {
    let spec = game_from_args(args.dim, &args.f, &args.g)?;
    let classes = basis_classes(&spec, decimals, mode);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["probability", "theta0", "theta1"])
        .expect("in-memory write");
    for class in &classes {
        for &point in &class.members {
            let (a0, a1) = point.angle_strings();
            w.write_record([class.key.to_string(), a0, a1])
                .expect("in-memory write");
        }
    }
    let stem = format!(
        "classes1_d{}_f{}_g{}",
        args.dim,
        spec.f().encoding(),
        scoring_encoding(&spec.g())
    );
    let params = json!({
        "kind": 1,
        "dim": args.dim,
        "f": spec.f(),
        "g": spec.g(),
        "precision": decimals,
        "rounding": mode,
    });
    let value = json!({
        "spec": spec,
        "decimals": decimals,
        "rounding": mode,
        "classes": classes,
    });
    Ok((stem, params, csv_bytes(w), value))
}

/// Kind 2: all non-constant function pairs at one grid point.
fn classes2_payload(
    args: &ClassesArgs,
    decimals: u8,
    mode: RoundingMode,
) -> Result<ClassesPayload, CliError> {
    check_dim(args.dim)?;
    let point = angle_pair(&args.theta0, &args.theta1)?;
    let classes = pair_classes(args.dim, point, decimals, mode)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["probability", "f", "g"])
        .expect("in-memory write");
    for class in &classes {
        for spec in &class.members {
            w.write_record([
                class.key.to_string(),
                spec.f().to_string(),
                spec.g().to_string(),
            ])
            .expect("in-memory write");
        }
    }
    let stem = format!("classes2_d{}_p{}_{}", args.dim, point.i0(), point.i1());
    let params = json!({
        "kind": 2,
        "dim": args.dim,
        "theta0": format_grid_angle(point.i0()),
        "theta1": format_grid_angle(point.i1()),
        "precision": decimals,
        "rounding": mode,
    });
    let value = json!({
        "point": point,
        "angles": render_point(point),
        "decimals": decimals,
        "rounding": mode,
        "classes": classes,
    });
    Ok((stem, params, csv_bytes(w), value))
}

/// Kind 3: (game, grid point) tuples; outputs carry class sizes only because
/// full membership runs to millions of tuples.
fn classes3_payload(
    args: &ClassesArgs,
    decimals: u8,
    mode: RoundingMode,
) -> Result<ClassesPayload, CliError> {
    check_dim(args.dim)?;
    let domain = match args.domain {
        DomainArg::Full => dimgames_core::TupleDomain::Full,
        DomainArg::MaxStratum => dimgames_core::TupleDomain::MaxStratum,
    };
    let domain_label = match args.domain {
        DomainArg::Full => "full",
        DomainArg::MaxStratum => "max-stratum",
    };
    let builder = CatalogBuilder::new()?;
    let classes = builder.tuple_classes(args.dim, decimals, mode, domain)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["probability", "count"])
        .expect("in-memory write");
    for class in &classes {
        w.write_record([class.key.to_string(), class.members.len().to_string()])
            .expect("in-memory write");
    }
    let sizes: Vec<serde_json::Value> = classes
        .iter()
        .map(|c| json!({"probability": c.key, "count": c.members.len()}))
        .collect();
    let stem = format!("classes3_d{}_{domain_label}", args.dim);
    let params = json!({
        "kind": 3,
        "dim": args.dim,
        "domain": domain_label,
        "precision": decimals,
        "rounding": mode,
    });
    let value = json!({
        "dim": args.dim,
        "domain": domain_label,
        "decimals": decimals,
        "rounding": mode,
        "classes": sizes,
    });
    Ok((stem, params, csv_bytes(w), value))
}

pub fn distinguishers(global: &GlobalOpts, catalog: CatalogArg) -> CommandResult {
    let mode = RoundingMode::from(global.rounding);
    let decimals = global.precision;
    let builder = CatalogBuilder::new()?;
    let (name, records): (&str, Vec<DistinguisherRecord>) = match catalog {
        CatalogArg::D1 => ("d1", builder.build_d1(decimals, mode)),
        CatalogArg::D2 => ("d2", builder.build_d2(decimals, mode)),
        CatalogArg::D3 => ("d3", builder.build_d3(global.threshold, decimals, mode)?),
    };

    let csv_path = output::prepare(&global.out, &format!("distinguishers_{name}.csv"))?;
    let json_path = global.out.join(format!("distinguishers_{name}.json"));
    output::write_file(
        &csv_path,
        distinguishers_to_csv(&records, decimals, mode).as_bytes(),
    )?;
    let mut value = json!({
        "catalog": name,
        "decimals": decimals,
        "rounding": mode,
        "records": records,
    });
    if matches!(catalog, CatalogArg::D3) {
        value["threshold"] = json!(global.threshold);
    }
    output::write_file(&json_path, &output::to_json_bytes(&value))?;
    println!(
        "wrote {} and {} ({} records)",
        csv_path.display(),
        json_path.display(),
        records.len()
    );

    let mut params = json!({
        "catalog": name,
        "precision": decimals,
        "rounding": global.rounding.label(),
    });
    if matches!(catalog, CatalogArg::D3) {
        params["threshold"] = json!(global.threshold);
    }
    Ok(Some(ManifestDraft {
        command: "distinguishers",
        params,
        rng_seed: None,
        outputs: vec![csv_path, json_path],
        manifest_path: global
            .out
            .join(format!("distinguishers_{name}.manifest.json")),
    }))
}

pub fn simulate(global: &GlobalOpts, args: &SimulateArgs) -> CommandResult {
    let mut config = ProtocolConfig::new(args.true_dim, args.rounds, global.seed).map_err(usage)?;
    let point = angle_pair(&args.theta0, &args.theta1)?;
    config.theta0 = point.theta0();
    config.theta1 = point.theta1();
    if let Some(token) = &args.f {
        config.f = parse_table2(token)?;
    }
    if let Some(token) = &args.g2 {
        config.g2 = parse_table2(token)?;
    }
    if let Some(token) = &args.g3 {
        config.g3 = parse_table3(token)?;
    }
    config.record_rounds = args.log;
    if config.f.is_constant() {
        return Err(CliError::Usage(format!(
            "--f {}: the referee function must not be constant",
            config.f
        )));
    }
    if config.g3.is_constant() {
        return Err(CliError::Usage(format!(
            "--g3 {}: the dim-3 scoring table must not be constant",
            config.g3
        )));
    }

    let result = run_protocol(&config)?;
    let report = json!({
        "config": config,
        "angles": {
            "theta0": format_grid_angle(point.i0()),
            "theta1": format_grid_angle(point.i1()),
        },
        "s": result.s,
        "expected_s_d2": result.expected_s_d2,
        "expected_s_d3": result.expected_s_d3,
        "decided_dim": result.decided_dim,
        "rounds": result.rounds,
        "seed": global.seed,
    });
    let report_bytes = output::to_json_bytes(&report);
    print!("{}", String::from_utf8_lossy(&report_bytes));

    let json_path = output::prepare(&global.out, "simulate.json")?;
    output::write_file(&json_path, &report_bytes)?;
    let mut outputs = vec![json_path];
    if args.log {
        let log_path = global.out.join("simulate_rounds.csv");
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["i", "x", "y", "a", "b", "Y"])
            .expect("in-memory write");
        for (i, record) in result.log.as_deref().unwrap_or(&[]).iter().enumerate() {
            w.write_record([
                i.to_string(),
                record.x.to_string(),
                record.y.to_string(),
                record.a.to_string(),
                record.b.to_string(),
                record.score.to_string(),
            ])
            .expect("in-memory write");
        }
        output::write_file(&log_path, &csv_bytes(w))?;
        outputs.push(log_path);
    }

    Ok(Some(ManifestDraft {
        command: "simulate",
        params: json!({
            "true_dim": args.true_dim,
            "rounds": args.rounds,
            "theta0": format_grid_angle(point.i0()),
            "theta1": format_grid_angle(point.i1()),
            "f": config.f,
            "g2": config.g2,
            "g3": config.g3,
            "log": args.log,
        }),
        rng_seed: Some(global.seed),
        outputs,
        manifest_path: global.out.join("simulate.manifest.json"),
    }))
}
