use std::io::Write;

fn main() {
    let result = indoor_channel_cli::dispatch(std::env::args_os().skip(1));
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    std::process::exit(result.exit_code);
}
