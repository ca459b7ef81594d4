//! Symbols of combinations of C(s) and C*(s): parsing, the multiplicative law
//! and the JSON form.

use compsemi::apsymbol::{symbol_of_combination, symbol_of_word, Combination};
use compsemi::operators::Word;

fn main() -> compsemi::Result<()> {
    let a = Combination::parse("1.0*I + 2.0*C(0.25)C*(0.5)")?;
    println!("{a}");
    let sym = symbol_of_combination(&a)?;
    println!("{}", serde_json::to_string(&sym.to_json()).expect("symbol serializes"));

    let u = Word::from_pairs(&[(0.25, false), (0.5, true)])?;
    let v = Word::from_pairs(&[(0.5, false)])?;
    let lhs = symbol_of_word(&u.concat(&v))?;
    let rhs = symbol_of_word(&u)?.mul(&symbol_of_word(&v)?)?;
    println!("ψ(uv) = ψ(u)ψ(v): {}", lhs == rhs);
    println!("ψ(u*) = conj ψ(u): {}", symbol_of_word(&u.adjoint())? == symbol_of_word(&u)?.conj());
    Ok(())
}
