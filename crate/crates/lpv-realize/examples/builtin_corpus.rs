//! Run the built-in regression corpus: every expected fact of the four
//! benchmark systems, evaluated and printed as a table.
//!
//! Run with: `cargo run --example builtin_corpus`

use lpv_realize::builtin::run_all;
use lpv_realize::cli::format_fact_table;

fn main() -> lpv_realize::Result<()> {
    let table = run_all()?;
    print!("{}", format_fact_table(&table));
    println!(
        "\n{}",
        if table.all_pass() {
            "all facts pass"
        } else {
            "SOME FACTS FAILED"
        }
    );
    Ok(())
}
