//! Prints the shell diagram of a splitting pattern given on the command line,
//! for example `cargo run --example shell_figure -- 0 2 8 12`.

use quadric_mdt::mdt::{render_ascii, shell_diagram_for_pattern};

fn main() {
    let pattern: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("pattern entries are integers"))
        .collect();
    match shell_diagram_for_pattern(&pattern) {
        Some(d) => print!("{}", render_ascii(&d)),
        None => {
            eprintln!("pattern must start at 0 and strictly increase");
            std::process::exit(2);
        }
    }
}
