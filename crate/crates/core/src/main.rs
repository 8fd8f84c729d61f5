fn main() {
    std::process::exit(qcopy::cli::main_exit_code());
}
