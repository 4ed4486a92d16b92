fn main() -> std::process::ExitCode {
    spec_align::cli::main()
}
