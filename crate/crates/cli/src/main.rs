use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match qverify::run(std::env::args_os(), &mut out) {
        Ok(code) => ExitCode::from(code as u8),
        Err(qverify::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qverify: {e}");
            ExitCode::from(qverify::EXIT_USAGE as u8)
        }
    }
}
