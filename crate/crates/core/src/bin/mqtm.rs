fn main() {
    std::process::exit(mqtm::cli::main());
}
