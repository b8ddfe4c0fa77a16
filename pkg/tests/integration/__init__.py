"""
End-to-end tests: pipeline graph, CLI, loopback server, acceptance suites
"""
