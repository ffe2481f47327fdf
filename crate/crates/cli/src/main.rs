use std::io;
use std::process::ExitCode;

use braceforge_cli::run_from;

fn configure_threads() {
    let Ok(value) = std::env::var("BRACEFORGE_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        #[cfg(feature = "parallel")]
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        #[cfg(not(feature = "parallel"))]
        Ok(n) if n > 0 => {}
        _ => eprintln!("warning: ignoring BRACEFORGE_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let exit = run_from(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(exit.code())
}
