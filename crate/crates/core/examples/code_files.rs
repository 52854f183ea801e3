//! Writing and reading codes as JSON lines.

use hrdc::constructions::construct_thm43;
use hrdc::io::{read_code, write_code};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = construct_thm43(2, 3)?;
    let mut buf = Vec::new();
    write_code(&code, &mut buf)?;
    let text = String::from_utf8(buf)?;
    for line in text.lines().take(3) {
        println!("{line}");
    }
    println!("... {} lines", text.lines().count());
    let back = read_code(text.as_bytes())?;
    println!("round trip equal: {}", back == code);
    Ok(())
}
