//! Writing a process to a text dump and reading it back.

use causalkit::dump::{parse_process, write_process};
use causalkit::processes::build_cyril;
use causalkit::Result;

/// Whether the process read back equals the one written.
pub fn run_example() -> Result<bool> {
    let w = build_cyril();
    let path = std::env::temp_dir().join(format!("cyril-{}.process", std::process::id()));
    std::fs::write(&path, write_process(&w))?;
    let text = std::fs::read_to_string(&path)?;
    std::fs::remove_file(&path)?;
    for line in text.lines().take(3) {
        println!("{}", &line[..line.len().min(100)]);
    }
    let back = parse_process(&text)?;
    println!("identical after round trip: {}", back == w);
    Ok(back == w)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
