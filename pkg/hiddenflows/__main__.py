"""hiddenflows: hidden information flows in Node-RED node packages"""
import hiddenflows.cli

if __name__ == "__main__":
    hiddenflows.cli.main()
