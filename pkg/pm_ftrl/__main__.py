from pm_ftrl.cli.application import app

if __name__ == "__main__":
    app()
