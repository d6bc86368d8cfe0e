//! Write the stock machines as text files and read them back.
//!
//! ```text
//! cargo run --example machine_files -- crates/core/machines
//! ```

use mqtm::machine::{format_machine, parse_machine};
use mqtm::programs::stock_machines;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1);
    for (name, m) in stock_machines() {
        let text = format_machine(&m);
        assert_eq!(parse_machine(&text)?, m);
        println!("{name}: {} states, {} lines", m.states().len(), text.lines().count());
        if let Some(dir) = &dir {
            std::fs::write(format!("{dir}/{name}.mqtm"), text)?;
        }
    }
    Ok(())
}
