fn main() {
    std::process::exit(raspvisor_cli::main_with(std::env::args_os()));
}
