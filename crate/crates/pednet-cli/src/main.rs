//! pednet: 3D pedestrian network centrality from the command line.
//!
//! Every command is a client of the analysis service: by default a private
//! in-process server is started on an ephemeral port, or point --server at
//! a running one. Exit codes: 0 success, 2 input error, 3 analysis error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pednet::centrality::{AnalysisRequest, Measures, RadiusMode};
use pednet::io;
use pednet::metric::{Metric, Radius, DEFAULT_NOISE_FLOOR_DEG};
use pednet::network::{TagFilter, DEFAULT_SNAP_TOLERANCE_M};
use pednet::stats::MeasureKind;
use pednet_api::*;
use pednet_client::{Client, ClientError};

mod output;

use output::OutputGuard;

#[derive(Parser)]
#[command(name = "pednet", version, about = "3D pedestrian network centrality analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a network and print its validation report.
    Validate(ValidateArgs),
    /// Compute per-link centrality tables for a metric x radius grid.
    Analyze(AnalyzeArgs),
    /// Fit observed flows against centrality over a metric x radius grid.
    Sweep(SweepArgs),
    /// Cross-metric correlation matrix at one radius.
    Xcorr(XcorrArgs),
    /// Run the analysis service.
    Serve(ServeArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Geojson,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RadiusModeArg {
    /// Euclidean network distance, center to center.
    Network,
    /// Literal 3D sphere around the origin center (sensitivity checks).
    Crowflight,
}

#[derive(Args)]
struct NetworkArgs {
    /// Network file (3D GeoJSON or link_id,seq,x,y,z CSV).
    #[arg(long)]
    network: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Endpoint snap tolerance in meters.
    #[arg(long, default_value_t = DEFAULT_SNAP_TOLERANCE_M)]
    snap_tolerance: f64,
    /// Keep only links carrying at least one of these tags.
    #[arg(long, value_delimiter = ',')]
    include_tags: Vec<String>,
    /// Drop links carrying any of these tags.
    #[arg(long, value_delimiter = ',')]
    exclude_tags: Vec<String>,
}

#[derive(Args)]
struct EngineArgs {
    /// Metric: topological | angular | euclidean | hybrid:<a> | hybrid:<rAng:rEuc>. Repeatable.
    #[arg(long = "metric", required = true)]
    metrics: Vec<String>,
    /// Radius in meters, or "inf". Repeatable.
    #[arg(long = "radius", required = true)]
    radii: Vec<String>,
    #[arg(long, value_enum, default_value_t = RadiusModeArg::Network)]
    radius_mode: RadiusModeArg,
    /// Comma-separated measures (closeness, betweenness).
    #[arg(long, value_delimiter = ',', default_values = ["closeness", "betweenness"])]
    measures: Vec<String>,
    /// Per-vertex angular noise floor in degrees.
    #[arg(long, default_value_t = DEFAULT_NOISE_FLOOR_DEG)]
    noise_floor: f64,
    /// Worker threads; 0 picks the machine default.
    #[arg(long, env = "PEDNET_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct ConnectionArgs {
    /// Base URL of a running pednet service; default spawns one in-process.
    #[arg(long)]
    server: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    connection: ConnectionArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    connection: ConnectionArgs,
    /// Output directory for links_<metric>_<radius>.csv tables.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    connection: ConnectionArgs,
    /// Observed flows CSV: link_id,flow[,period].
    #[arg(long)]
    obs: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct XcorrArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    connection: ConnectionArgs,
    /// Measure whose per-link series are correlated across metrics.
    #[arg(long, default_value = "betweenness")]
    measure: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:7878")]
    bind: String,
}

/// Errors carrying their exit code.
enum CliError {
    Input(String),
    Analysis(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Analysis(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Analysis(m) => m,
        }
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        match e.api_code() {
            Some(ErrorCode::Input) | Some(ErrorCode::NotFound) => CliError::Input(e.to_string()),
            _ => CliError::Analysis(e.to_string()),
        }
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let result = runtime.block_on(async {
        match cli.command {
            Command::Validate(args) => run_validate(args).await,
            Command::Analyze(args) => run_analyze(args).await,
            Command::Sweep(args) => run_sweep(args).await,
            Command::Xcorr(args) => run_xcorr(args).await,
            Command::Serve(args) => run_serve(args).await,
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// A service connection: remote, or private in-process on an ephemeral port.
struct Session {
    client: Client,
    /// Networks this run registered, cleaned up on drop for remote servers.
    created: Vec<String>,
    remote: bool,
}

async fn connect(connection: &ConnectionArgs) -> Result<Session, CliError> {
    match &connection.server {
        Some(url) => {
            let client = Client::new(url.clone());
            client
                .health()
                .await
                .map_err(|e| CliError::Analysis(format!("cannot reach service at {url}: {e}")))?;
            Ok(Session {
                client,
                created: Vec::new(),
                remote: true,
            })
        }
        None => {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
                .await
                .map_err(|e| CliError::Analysis(format!("cannot bind local service: {e}")))?;
            let addr = listener
                .local_addr()
                .map_err(|e| CliError::Analysis(e.to_string()))?;
            let state = pednet_server::AppState::new();
            tokio::spawn(pednet_server::serve(listener, state));
            Ok(Session {
                client: Client::new(format!("http://{addr}")),
                created: Vec::new(),
                remote: false,
            })
        }
    }
}

impl Session {
    async fn cleanup(&self) {
        if self.remote {
            for id in &self.created {
                let _ = self.client.delete_network(id).await;
            }
        }
    }
}

fn infer_format(args: &NetworkArgs) -> Result<NetworkFormat, CliError> {
    if let Some(f) = args.format {
        return Ok(match f {
            FormatArg::Geojson => NetworkFormat::Geojson,
            FormatArg::Csv => NetworkFormat::Csv,
        });
    }
    match args
        .network
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("geojson") | Some("json") => Ok(NetworkFormat::Geojson),
        Some("csv") => Ok(NetworkFormat::Csv),
        other => Err(CliError::Input(format!(
            "cannot infer format from extension {other:?}; pass --format"
        ))),
    }
}

/// Loads (and optionally tag-filters) the network; returns the working id.
async fn load_network(session: &mut Session, args: &NetworkArgs) -> Result<String, CliError> {
    let content = std::fs::read_to_string(&args.network)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.network.display())))?;
    if !(args.snap_tolerance > 0.0) {
        return Err(CliError::Input(format!(
            "snap tolerance must be > 0, got {}",
            args.snap_tolerance
        )));
    }
    let response = session
        .client
        .load_network(&LoadNetworkRequest {
            name: args.network.file_name().map(|n| n.to_string_lossy().into_owned()),
            format: infer_format(args)?,
            content,
            snap_tolerance_m: Some(args.snap_tolerance),
        })
        .await?;
    session.created.push(response.network.id.clone());
    for warning in &response.warnings {
        eprintln!("warning: {warning}");
    }
    eprint!("{}", response.validation);

    if args.include_tags.is_empty() && args.exclude_tags.is_empty() {
        return Ok(response.network.id);
    }
    let filter = TagFilter {
        include: args.include_tags.iter().cloned().collect(),
        exclude: args.exclude_tags.iter().cloned().collect(),
    };
    let filtered = session
        .client
        .filter(&response.network.id, &FilterRequest { name: None, filter })
        .await?;
    session.created.push(filtered.network.id.clone());
    eprintln!(
        "filtered: {} of {} links kept",
        filtered.network.links, response.network.links
    );
    Ok(filtered.network.id)
}

fn parse_engine(args: &EngineArgs) -> Result<(AnalysisRequest, Vec<MeasureKind>), CliError> {
    let mut metrics = Vec::new();
    for m in &args.metrics {
        metrics.push(Metric::parse(m).map_err(|e| CliError::Input(e.to_string()))?);
    }
    let mut radii = Vec::new();
    for r in &args.radii {
        radii.push(
            Radius::parse(r).ok_or_else(|| CliError::Input(format!("bad radius `{r}`")))?,
        );
    }
    let mut measures = Vec::new();
    for m in &args.measures {
        measures.push(
            MeasureKind::parse(m).ok_or_else(|| CliError::Input(format!("bad measure `{m}`")))?,
        );
    }
    if measures.is_empty() {
        return Err(CliError::Input("no measures requested".to_string()));
    }
    let mut request = AnalysisRequest::new(metrics, radii);
    request.measures = Measures {
        closeness: measures.contains(&MeasureKind::Closeness),
        betweenness: measures.contains(&MeasureKind::Betweenness),
    };
    request.radius_mode = match args.radius_mode {
        RadiusModeArg::Network => RadiusMode::Network,
        RadiusModeArg::Crowflight => RadiusMode::Crowflight,
    };
    request.noise_floor_deg = args.noise_floor;
    request.threads = args.threads;
    Ok((request, measures))
}

fn ensure_out_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))
}

async fn run_validate(args: ValidateArgs) -> Result<(), CliError> {
    let mut session = connect(&args.connection).await?;
    let result = async {
        let id = load_network(&mut session, &args.network).await?;
        let report = session.client.validation(&id).await?;
        print!("{report}");
        Ok(())
    }
    .await;
    session.cleanup().await;
    result
}

async fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let mut session = connect(&args.connection).await?;
    let result = async {
        let id = load_network(&mut session, &args.network).await?;
        let (request, _) = parse_engine(&args.engine)?;
        let response = session.client.analyze(&id, &request).await?;

        ensure_out_dir(&args.out)?;
        let mut guard = OutputGuard::new();
        for table in &response.tables {
            let path = args.out.join(io::links_filename(&table.metric, &table.radius));
            guard.stage(&path);
            let file = std::fs::File::create(&path)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            io::write_links_csv(std::io::BufWriter::new(file), table)
                .map_err(|e| CliError::Analysis(e.to_string()))?;
            eprintln!("wrote {}", path.display());
        }

        // Global closeness present: report intelligibility per metric.
        if request.radii.iter().any(|r| matches!(r, Radius::Infinite)) {
            for &metric in &request.metrics {
                let line = session
                    .client
                    .intelligibility(
                        &id,
                        &IntelligibilityRequest {
                            metric,
                            noise_floor_deg: request.noise_floor_deg,
                        },
                    )
                    .await;
                match line {
                    Ok(r) => println!(
                        "intelligibility ({metric}): r2 = {}",
                        io::fmt_sig(r.r_squared)
                    ),
                    Err(e) => println!("intelligibility ({metric}): {e}"),
                }
            }
        }
        guard.disarm();
        Ok(())
    }
    .await;
    session.cleanup().await;
    result
}

async fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut session = connect(&args.connection).await?;
    let result = async {
        let obs_text = std::fs::read_to_string(&args.obs)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.obs.display())))?;
        let observations = io::parse_observations(&obs_text)?;
        let id = load_network(&mut session, &args.network).await?;
        let (analysis, measures) = parse_engine(&args.engine)?;
        let response = session
            .client
            .sweep(
                &id,
                &SweepRequest {
                    analysis,
                    measures,
                    observations,
                },
            )
            .await?;

        ensure_out_dir(&args.out)?;
        let mut guard = OutputGuard::new();
        let path = args.out.join("sweep.csv");
        guard.stage(&path);
        let file = std::fs::File::create(&path)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        io::write_sweep_csv(std::io::BufWriter::new(file), &response.result)
            .map_err(|e| CliError::Analysis(e.to_string()))?;
        eprintln!("wrote {}", path.display());
        guard.disarm();
        Ok(())
    }
    .await;
    session.cleanup().await;
    result
}

async fn run_xcorr(args: XcorrArgs) -> Result<(), CliError> {
    let mut session = connect(&args.connection).await?;
    let result = async {
        let id = load_network(&mut session, &args.network).await?;
        let (analysis, _) = parse_engine(&args.engine)?;
        let measure = MeasureKind::parse(&args.measure)
            .ok_or_else(|| CliError::Input(format!("bad measure `{}`", args.measure)))?;
        if analysis.radii.len() != 1 {
            return Err(CliError::Input(
                "xcorr takes exactly one --radius".to_string(),
            ));
        }
        let radius = analysis.radii[0];
        let response = session
            .client
            .xcorr(
                &id,
                &XcorrRequest {
                    analysis,
                    measure,
                    radius,
                },
            )
            .await?;

        ensure_out_dir(&args.out)?;
        let mut guard = OutputGuard::new();
        let path = args.out.join("xcorr.csv");
        guard.stage(&path);
        let file = std::fs::File::create(&path)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        io::write_xcorr_csv(std::io::BufWriter::new(file), &response.result)
            .map_err(|e| CliError::Analysis(e.to_string()))?;
        eprintln!("wrote {}", path.display());
        guard.disarm();
        Ok(())
    }
    .await;
    session.cleanup().await;
    result
}

async fn run_serve(args: ServeArgs) -> Result<(), CliError> {
    let listener = tokio::net::TcpListener::bind(&args.bind)
        .await
        .map_err(|e| CliError::Input(format!("cannot bind {}: {e}", args.bind)))?;
    let addr = listener
        .local_addr()
        .map_err(|e| CliError::Analysis(e.to_string()))?;
    eprintln!("pednet service listening on http://{addr}");
    pednet_server::serve(listener, pednet_server::AppState::new())
        .await
        .map_err(|e| CliError::Analysis(e.to_string()))
}
