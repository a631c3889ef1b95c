package com.fixture.p3;

public class NoMatches {

  public void run(int x) {
    if (x < 0) {
      throw new CustomFixtureException();
    }
    throw new AnotherCustomException();
  }
}
