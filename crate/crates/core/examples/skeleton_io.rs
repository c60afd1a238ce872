//! Writes a generated sequence as text and CSV, reads both back and checks
//! that nothing changed.
//!
//! cargo run --example skeleton_io

use skelgest::harness::{generate_sequence, single_person_template};
use skelgest::skeleton::{
    parse_skeleton_stream, read_skeleton_csv, serialize_skeleton_stream, write_skeleton_csv, Joint,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let template = single_person_template("waving").ok_or("missing template")?;
    let seq = generate_sequence(&template, 90, 1)?;

    let text = serialize_skeleton_stream(&seq)?;
    let back = parse_skeleton_stream(&text)?;
    assert_eq!(back.frames(), seq.frames());
    println!("text: {} frames, {} bytes", back.len(), text.len());

    let mut csv = Vec::new();
    write_skeleton_csv(&mut csv, &seq)?;
    let back = read_skeleton_csv(csv.as_slice())?;
    assert_eq!(back.frames(), seq.frames());
    println!("csv: {} frames, {} bytes", back.len(), csv.len());

    let hand = seq.frames()[45].joint(Joint::HandRight);
    println!("right hand at frame 46: ({:.3}, {:.3}, {:.3})", hand.x, hand.y, hand.z);

    match parse_skeleton_stream("0.1 0.2 oops") {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
