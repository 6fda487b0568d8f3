fn main() {
    std::process::exit(wenodec::main_entry());
}
