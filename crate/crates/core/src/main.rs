fn main() -> std::process::ExitCode {
    superweil::cli::main()
}
