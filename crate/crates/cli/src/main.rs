use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, report, json) = ascurves_cli::run(std::env::args_os());
    let out = ascurves_cli::render(&report, json);
    if report.command == "parse" && code != 0 && !json {
        eprint!("{out}");
    } else if json {
        println!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(code as u8)
}
