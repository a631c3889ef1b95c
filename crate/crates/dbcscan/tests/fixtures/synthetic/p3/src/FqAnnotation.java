package com.fixture.p3;

public class FqAnnotation {

  public void apply(@androidx.annotation.NonNull String value) {
  }
}
