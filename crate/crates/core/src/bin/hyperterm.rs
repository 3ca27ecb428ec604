fn main() -> std::process::ExitCode {
    hyperterm::cli::main()
}
