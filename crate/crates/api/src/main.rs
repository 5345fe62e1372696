use std::path::PathBuf;
use std::process::ExitCode;

use dpw_api::{serve, system_clock, AppState};
use dpw_core::{Config, Workspace};

#[tokio::main]
async fn main() -> ExitCode {
    let explicit = std::env::args().nth(1).map(PathBuf::from);
    let path = Config::resolve_path(explicit.as_deref());
    let state = Config::load(&path)
        .and_then(Workspace::open)
        .and_then(|ws| AppState::new(ws, system_clock()));
    let state = match state {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let bind = state.ws.config.server.bind.clone();
    match serve(state, &bind).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
