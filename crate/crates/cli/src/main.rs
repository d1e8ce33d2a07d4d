use clap::Parser;

use tandem_cli::{run, Args, CliError};

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(report) => {
            print!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
        }
        Err(CliError::Failed { summary }) => {
            print!("{summary}");
            std::process::exit(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
