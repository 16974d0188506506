fn main() {
    println!("scaffold");
}
